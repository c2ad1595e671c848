#include <cmath>

#include <Eigen/Dense>

#include "isoresolve/error.hpp"
#include "isoresolve/solvers.hpp"

namespace isoresolve {
namespace {

// Relative residual at which the nodal descent hands over to Newton.
constexpr double kNodalPolishSwitch = 1e-5;

// Maximal runs of same-signed nonzero nodal values, as masked copies of u.
std::vector<GridFunction> components(const GridFunction& u) {
    std::vector<GridFunction> out;
    int sign = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const int sj = u[j] > 0.0 ? 1 : (u[j] < 0.0 ? -1 : 0);
        if (sj == 0) {
            sign = 0;
            continue;
        }
        if (sj != sign) {
            out.push_back(GridFunction::zeros(u.mesh_ptr()));
            sign = sj;
        }
        out.back()[j] = u[j];
    }
    return out;
}

GridFunction combine(const std::vector<GridFunction>& parts, const Eigen::VectorXd& t) {
    GridFunction v = GridFunction::zeros(parts.front().mesh_ptr());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += t[static_cast<Eigen::Index>(i)] * parts[i][j];
    }
    return v;
}

// Maximizes J over the cone spanned by the nodal components, which places
// every component on its own Nehari set (∂J/∂t_i = 0).
std::optional<GridFunction> nehari_project(const GridFunction& u, const ProblemSpec& spec,
                                           const Tridiagonal& K) {
    const std::vector<GridFunction> parts = components(u);
    const auto m = static_cast<Eigen::Index>(parts.size());
    if (m == 0) return std::nullopt;
    std::vector<std::vector<double>> Kw;
    for (const GridFunction& w : parts) Kw.push_back(K.apply(w.values()));

    Eigen::VectorXd t(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double a = dot(Kw[i], parts[i].values());
        const double b = lq_mass(parts[i], spec.q);
        if (!(a > 0.0) || !(b > 0.0)) return std::nullopt;
        t[i] = std::pow(a / b, 1.0 / (spec.q - 2.0));
    }
    for (int it = 0; it < 60; ++it) {
        const GridFunction v = combine(parts, t);
        const std::vector<double> load = nonlinear_load(v, spec.q);
        const Tridiagonal jac = nonlinear_jacobian(v, spec.q);
        Eigen::VectorXd g(m);
        Eigen::MatrixXd H(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            double kv = 0.0;
            for (Eigen::Index j = 0; j < m; ++j) kv += t[j] * dot(Kw[j], parts[i].values());
            g[i] = kv - dot(load, parts[i].values());
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            const std::vector<double> Mw = jac.apply(parts[j].values());
            for (Eigen::Index i = 0; i < m; ++i) {
                H(i, j) = dot(Kw[j], parts[i].values()) - dot(Mw, parts[i].values());
            }
        }
        const Eigen::VectorXd step = H.fullPivLu().solve(g);
        double damping = 1.0;
        while ((t - damping * step).minCoeff() <= 0.0 && damping > 1e-6) damping *= 0.5;
        t -= damping * step;
        if (step.norm() * damping <= 1e-15 * t.norm()) break;
    }
    if (!(t.minCoeff() > 0.0) || !t.allFinite()) return std::nullopt;
    return combine(parts, t);
}

// Split points at quantiles of a per-cell measure; returns nodal indices.
std::vector<std::size_t> quantile_splits(const GradedMesh& mesh, const std::vector<double>& per_cell,
                                         int level) {
    std::vector<double> cumulative(mesh.size(), 0.0);
    for (int c = 0; c < mesh.cells(); ++c) cumulative[c + 1] = cumulative[c] + per_cell[c];
    const double total = cumulative.back();
    std::vector<std::size_t> out;
    for (int i = 1; i <= level; ++i) {
        const double target = total * i / (level + 1);
        std::size_t best = 1;
        for (std::size_t j = 1; j + 1 < mesh.size(); ++j) {
            if (std::abs(cumulative[j] - target) < std::abs(cumulative[best] - target)) best = j;
        }
        out.push_back(best);
    }
    return out;
}

std::vector<std::vector<std::size_t>> candidate_splits(const GradedMesh& mesh, int level) {
    std::vector<double> singular(mesh.cells());
    std::vector<double> volume(mesh.cells());
    std::vector<double> length(mesh.cells());
    for (int c = 0; c < mesh.cells(); ++c) {
        for (const QuadPoint& p : mesh.points(Measure::Singular, c)) singular[c] += p.weight;
        volume[c] = 0.0;
        for (const QuadPoint& p : mesh.points(Measure::Volume, c)) volume[c] += p.weight;
        length[c] = mesh.width(c);
    }
    return {quantile_splits(mesh, singular, level), quantile_splits(mesh, volume, level),
            quantile_splits(mesh, length, level)};
}

struct NodalAttempt {
    std::optional<GridFunction> u;
    int iterations = 0;
    std::string failure;
};

NodalAttempt descend_nodal(GridFunction u, const ProblemSpec& spec, const SolverConfig& cfg,
                           int level) {
    NodalAttempt out;
    const Tridiagonal K = energy_matrix(u.mesh(), spec.k);
    auto projected = nehari_project(u, spec, K);
    if (!projected) {
        out.failure = "initial guess has a degenerate nodal component";
        return out;
    }
    u = *projected;
    double J = energy_J(u, spec);
    double alpha = 1.0;
    for (int it = 0; it < cfg.max_iters; ++it) {
        out.iterations = it;
        const Residual r = residual(u, spec);
        if (r.dual_norm <= kNodalPolishSwitch * (1.0 + h1_norm(u))) {
            out.u = u;
            return out;
        }
        const GridFunction g = riesz(r.vector);
        const double slope = r.dual_norm * r.dual_norm;
        bool accepted = false;
        alpha = std::min(2.0 * alpha, 1e3);
        std::optional<GridFunction> smallest;
        for (int halving = 0; halving < 50; ++halving, alpha *= 0.5) {
            GridFunction trial = u;
            for (std::size_t j = 0; j < trial.size(); ++j) trial[j] -= alpha * g[j];
            if (nodal_count(trial) != level) continue;
            auto p = nehari_project(trial, spec, K);
            if (!p) continue;
            smallest = p;
            const double Jt = energy_J(*p, spec);
            if (Jt <= J - 1e-4 * alpha * slope) {
                u = std::move(*p);
                J = Jt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // flat line search: take the smallest admissible step if it does not raise J
            if (!smallest || !(energy_J(*smallest, spec) <= J)) {
                out.failure = "line search stalled at relative residual " +
                              std::to_string(r.dual_norm / (1.0 + h1_norm(u)));
                return out;
            }
            u = std::move(*smallest);
            J = energy_J(u, spec);
        }
    }
    out.failure = "iteration limit reached";
    return out;
}

}  // namespace

SolutionRecord solve_nodal(const ProblemSpec& spec, int level, const SolverConfig& cfg,
                           const SolutionRecord* ground_in) {
    if (level < 1) fail(ErrorKind::InvalidArgument, "solve_nodal: level must be >= 1");
    const SolutionRecord ground = ground_in ? *ground_in : minimize_Q(spec, cfg);
    const auto mesh = ground.u.mesh_ptr();
    const double J0 = ground.energy_J;

    std::string failures;
    for (const auto& splits : candidate_splits(*mesh, level)) {
        GridFunction u0 = ground.u;
        std::size_t region = 0;
        for (std::size_t j = 0; j < u0.size(); ++j) {
            while (region < splits.size() && j > splits[region]) ++region;
            if (region < splits.size() && j == splits[region]) {
                u0[j] = 0.0;
            } else if (region % 2 == 1) {
                u0[j] = -u0[j];
            }
        }
        NodalAttempt attempt = descend_nodal(u0, spec, cfg, level);
        if (!attempt.u) {
            failures += " [" + attempt.failure + "]";
            continue;
        }
        GridFunction u = *attempt.u;
        int iterations = attempt.iterations;
        if (cfg.newton_polish) {
            NewtonResult polished = newton_polish(u, spec, 1e-3 * cfg.tol_residual);
            iterations += polished.iterations;
            u = polished.u;
        }
        u = nehari_rescale(u, spec).second;
        SolutionRecord rec =
            make_record(u, spec, SolutionKind::Nodal, cfg.tol_residual, iterations, false);
        if (rec.nodal_count != level || !(rec.energy_J > J0)) {
            failures += " [collapsed to nodal count " + std::to_string(rec.nodal_count) +
                        ", J = " + std::to_string(rec.energy_J) + "]";
            continue;
        }
        rec.converged = rec.residual_norm <= cfg.tol_residual;
        if (!rec.converged) {
            fail(ErrorKind::NonConvergence,
                 "solve_nodal: residual " + std::to_string(rec.residual_norm) + " above tolerance");
        }
        rec.checks.push_back({"energy_above_ground", rec.energy_J - J0, 0.0, rec.energy_J > J0});
        return rec;
    }
    fail(ErrorKind::NodalCollapse, "solve_nodal: level " + std::to_string(level) +
                                       " collapsed for every initial split:" + failures);
}

}  // namespace isoresolve
