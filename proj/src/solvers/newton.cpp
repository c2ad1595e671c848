#include <cmath>

#include "isoresolve/solvers.hpp"

namespace isoresolve {

NewtonResult newton_polish(const GridFunction& u0, const ProblemSpec& spec, double target,
                           int max_iters) {
    const Tridiagonal K = energy_matrix(u0.mesh(), spec.k);
    GridFunction u = u0;
    Residual r = residual(u, spec);
    int iters = 0;
    while (iters < max_iters && r.dual_norm > target) {
        Tridiagonal jac = K;
        const Tridiagonal nl = nonlinear_jacobian(u, spec.q);
        for (std::size_t i = 0; i < jac.size(); ++i) jac.diag[i] -= nl.diag[i];
        for (std::size_t i = 0; i + 1 < jac.size(); ++i) {
            jac.lower[i] -= nl.lower[i];
            jac.upper[i] -= nl.upper[i];
        }
        const std::vector<double> step = jac.solve(r.vector.values());
        bool accepted = false;
        double damping = 1.0;
        for (int halving = 0; halving < 12; ++halving, damping *= 0.5) {
            GridFunction trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= damping * step[i];
            Residual rt = residual(trial, spec);
            if (std::isfinite(rt.dual_norm) && rt.dual_norm < r.dual_norm) {
                u = std::move(trial);
                r = std::move(rt);
                accepted = true;
                break;
            }
        }
        ++iters;
        if (!accepted) break;
    }
    return {u, r.dual_norm, iters};
}

}  // namespace isoresolve
