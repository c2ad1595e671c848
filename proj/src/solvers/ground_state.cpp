#include <cmath>
#include <numbers>

#include "isoresolve/error.hpp"
#include "isoresolve/solvers.hpp"

namespace isoresolve {
namespace {

// Residual level at which descent hands over to Newton.
constexpr double kPolishSwitch = 1e-6;

struct DescentResult {
    GridFunction u;  // normalized to B = 1
    int iterations = 0;
    bool converged = false;
};

GridFunction normalize_mass(const GridFunction& u, double q) {
    return u.scaled(1.0 / std::pow(lq_mass(u, q), 1.0 / q));
}

double Q_of(const GridFunction& u, const ProblemSpec& spec) {
    return quadratic_energy(u, spec) / std::pow(lq_mass(u, spec.q), 2.0 / spec.q);
}

// Projected Sobolev-gradient descent on Q over {B = 1, u >= 0}. On B = 1,
// Q'(u) = 2 (K u - A N(u)) and its Riesz representative is the direction.
DescentResult descend(GridFunction u, const ProblemSpec& spec, const SolverConfig& cfg,
                      double switch_level) {
    const Tridiagonal K = energy_matrix(u.mesh(), spec.k);
    const Tridiagonal& G = h1_gram(u.mesh());
    const double q = spec.q;
    u = normalize_mass(u.abs(), q);
    double Q = Q_of(u, spec);
    double alpha = 1.0;
    double previous_J = std::numeric_limits<double>::infinity();
    DescentResult out{u};
    for (int it = 0; it < cfg.max_iters; ++it) {
        const double A = quadratic_energy(u, spec);
        std::vector<double> dual = K.apply(u.values());
        const std::vector<double> load = nonlinear_load(u, q);
        for (std::size_t i = 0; i < dual.size(); ++i) dual[i] -= A * load[i];
        const std::vector<double> g = G.solve(dual);
        const double slope = dot(dual, g);

        // the Nehari rescaling t u of u has weak residual t (K u - A N(u))
        const double t = std::pow(A, 1.0 / (q - 2.0));
        const double scaled_residual = t * std::sqrt(std::max(slope, 0.0));
        const double J = (0.5 - 1.0 / q) * std::pow(t, q);
        const double rescaled_norm = t * h1_norm(u);
        out.u = u;
        out.iterations = it;
        if (scaled_residual <= switch_level * (1.0 + rescaled_norm) &&
            std::abs(J - previous_J) <= 1e-12) {
            out.converged = true;
            return out;
        }
        previous_J = J;

        bool accepted = false;
        alpha = std::min(2.0 * alpha, 1e3);
        for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
            GridFunction trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= alpha * g[i];
            trial = trial.abs();
            const double B = lq_mass(trial, q);
            if (!(B > 0.0)) continue;
            trial = trial.scaled(1.0 / std::pow(B, 1.0 / q));
            const double Qt = Q_of(trial, spec);
            if (Qt <= Q - 1e-4 * alpha * 2.0 * slope) {
                u = std::move(trial);
                Q = Qt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // flat line search: the smallest step is accepted only if it
            // does not increase Q
            GridFunction trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= alpha * g[i];
            trial = normalize_mass(trial.abs(), q);
            const double Qt = Q_of(trial, spec);
            if (!(Qt <= Q)) {
                out.u = u;
                out.iterations = it;
                return out;
            }
            u = std::move(trial);
            Q = Qt;
        }
    }
    out.u = u;
    out.iterations = cfg.max_iters;
    return out;
}

}  // namespace

std::shared_ptr<const GradedMesh> solver_mesh(const ProblemSpec& spec, const SolverConfig& cfg) {
    const double gamma =
        cfg.grading_gamma > 0.0 ? cfg.grading_gamma : GradedMesh::default_grading(spec.s);
    return GradedMesh::build(spec.profile, spec.s, cfg.mesh_n, gamma);
}

void require_gates(const ProblemSpec& spec, const GradedMesh& mesh) {
    const ExponentReport exponent = critical_exponent(spec.profile, spec.s);
    if (!exponent.admissible(spec.q)) {
        fail(ErrorKind::GateRefused, "exponent gate: q = " + std::to_string(spec.q) + " is not below " +
                                         exponent.describe() + " (strict subcriticality)");
    }
    const CoercivityCertificate cert = coercivity_check(spec, mesh);
    if (!cert.pass) fail(ErrorKind::NotCoercive, "coercivity gate: " + cert.message);
}

std::pair<double, GridFunction> nehari_rescale(const GridFunction& u, const ProblemSpec& spec) {
    const double A = quadratic_energy(u, spec);
    const double B = lq_mass(u, spec.q);
    if (!(A > 0.0) || !(B > 0.0)) {
        fail(ErrorKind::InvalidArgument, "nehari_rescale: need A > 0 and B > 0");
    }
    const double t = std::pow(A / B, 1.0 / (spec.q - 2.0));
    return {t, u.scaled(t)};
}

SolutionRecord minimize_Q(const ProblemSpec& spec, const SolverConfig& cfg) {
    auto mesh = solver_mesh(spec, cfg);
    require_gates(spec, *mesh);

    const double switch_level = cfg.newton_polish ? std::max(cfg.tol_residual, kPolishSwitch)
                                                  : cfg.tol_residual;
    DescentResult descent = descend(GridFunction::sample(mesh, [](double) { return 1.0; }), spec,
                                    cfg, switch_level);
    GridFunction u = nehari_rescale(descent.u, spec).second;
    int iterations = descent.iterations;
    bool converged = descent.converged;
    if (cfg.newton_polish && descent.converged) {
        const double target = 1e-3 * cfg.tol_residual;
        NewtonResult polished = newton_polish(u, spec, target);
        iterations += polished.iterations;
        if (polished.u.min() > 0.0) u = nehari_rescale(polished.u, spec).second;
    }
    const double norm = h1_norm(u);
    const double r = residual(u, spec).dual_norm;
    converged = converged && r <= cfg.tol_residual * (1.0 + norm);
    if (!converged) {
        fail(ErrorKind::NonConvergence,
             "minimize_Q: residual " + std::to_string(r) + " after " + std::to_string(iterations) +
                 " iterations");
    }
    return make_record(u, spec, SolutionKind::Ground, cfg.tol_residual, iterations, converged);
}

}  // namespace isoresolve
