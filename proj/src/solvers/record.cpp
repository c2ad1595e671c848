#include <algorithm>
#include <cmath>

#include "isoresolve/error.hpp"
#include "isoresolve/oracle.hpp"
#include "isoresolve/solvers.hpp"

namespace isoresolve {

std::string to_string(SolutionKind kind) {
    switch (kind) {
        case SolutionKind::Ground: return "ground";
        case SolutionKind::Nodal: return "nodal";
        case SolutionKind::Shooting: return "shooting";
    }
    return "unknown";
}

bool SolutionRecord::checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.pass; });
}

const InvariantCheck* SolutionRecord::find_check(const std::string& name) const {
    for (const InvariantCheck& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

SolutionRecord make_record(GridFunction u, const ProblemSpec& spec, SolutionKind kind,
                           double tolerance, int iterations, bool converged) {
    SolutionRecord rec(u);
    rec.kind = kind;
    rec.quadratic_energy = quadratic_energy(u, spec);
    rec.lq_mass = lq_mass(u, spec.q);
    rec.energy_J = 0.5 * rec.quadratic_energy - rec.lq_mass / spec.q;
    rec.residual_norm = residual(u, spec).dual_norm;
    rec.tolerance = tolerance;
    rec.nodal_count = nodal_count(u);
    rec.iterations = iterations;
    rec.converged = converged;

    const double A = rec.quadratic_energy;
    const double B = rec.lq_mass;
    const double J = rec.energy_J;
    if (kind != SolutionKind::Shooting) {
        rec.checks.push_back({"residual", rec.residual_norm, tolerance, rec.residual_norm <= tolerance});
    }
    const double identity = std::abs(A - B) / (A + B);
    rec.checks.push_back({"critical_point_identity", identity, 1e-8, identity <= 1e-8});
    const double energy_defect = std::abs(J - (0.5 - 1.0 / spec.q) * B);
    const double energy_bound = 1e-6 * (1.0 + std::abs(J));
    rec.checks.push_back({"energy_identity", energy_defect, energy_bound, energy_defect <= energy_bound});

    if (kind == SolutionKind::Nodal) {
        rec.checks.push_back({"nodal_count", static_cast<double>(rec.nodal_count), 1.0,
                              rec.nodal_count >= 1});
        return rec;
    }
    if (rec.nodal_count > 0) return rec;  // odd shooting match

    const double min_phi = u.min();
    rec.checks.push_back({"u == 0 or u > 0", min_phi, 0.0, min_phi > 0.0});

    // φ(0) dominates the first tenth of the nodes
    const std::size_t window = std::max<std::size_t>(2, u.size() / 10);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < window; ++j) excess = std::max(excess, u[j] - u[0]);
    rec.checks.push_back({"focal_maximum", excess, 0.0, excess <= 0.0});

    const HolderFit fit = holder_fit(u, spec.s);
    const double target = 2.0 - spec.s;
    const double deviation = fit.defined ? std::abs(fit.exponent - target) / target : 1.0;
    rec.checks.push_back({"holder_exponent", fit.defined ? fit.exponent : 0.0, target,
                          fit.defined && deviation <= 0.1});
    return rec;
}

}  // namespace isoresolve
