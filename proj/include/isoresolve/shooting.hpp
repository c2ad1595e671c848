#pragma once

#include <utility>
#include <vector>

#include "isoresolve/problem.hpp"
#include "isoresolve/solvers.hpp"

namespace isoresolve {

/// Which focal endpoint an initial-value shot starts from.
enum class Side { Left, Right };

struct ShootOptions {
    double t_start = 0.0;  // 0 selects the first node of the default solver mesh
    double t_end = 0.0;    // 0 selects D/2; measured from the starting endpoint
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    double blowup = 1e8;
    std::vector<double> record_at;  // distances from the starting endpoint, increasing
    Side side = Side::Left;
};

/// Initial-value shot into the interval from a focal endpoint. For Side::Right
/// the variable is τ = D - t and `slope` is dφ/dτ.
struct ShootState {
    Side side = Side::Left;
    double phi0 = 0.0;
    // φ ≈ φ0 + singular_coefficient τ^{2-s} + quadratic_coefficient τ²
    double singular_coefficient = 0.0;
    double quadratic_coefficient = 0.0;
    double t_start = 0.0;
    double start_value = 0.0;
    double start_slope = 0.0;
    double t_end = 0.0;
    double end_value = 0.0;
    double end_slope = 0.0;
    bool blew_up = false;
    double blowup_distance = 0.0;
    int steps = 0;
    std::vector<double> trace_t;
    std::vector<double> trace_phi;
    std::vector<double> trace_slope;
};

/// Frobenius startup value and slope at distance τ from the endpoint.
std::pair<double, double> startup_expansion(const ProblemSpec& spec, double phi0, double tau,
                                            Side side = Side::Left);

/// Integrates the reduced ODE from the endpoint with φ = φ0, φ' = 0 by a
/// variable-order BDF stepper. Throws Error(InvalidArgument) unless φ0 > 0.
ShootState shoot_from_zero(const ProblemSpec& spec, double phi0, const ShootOptions& options = {});

enum class Parity { Even, Odd };

struct MatchResult {
    SolutionRecord record;
    double phi0 = 0.0;
    double phiD = 0.0;  // right endpoint value (equals ±phi0 on symmetric specs)
    double defect = 0.0;
    int evaluations = 0;
    ShootState left;
};

/// Two-sided shooting for the boundary-value problem. On symmetric specs the
/// defect is φ'(D/2) (even) or φ(D/2) (odd), solved on `bracket` for φ0; on
/// other specs a Newton iteration on the value and slope mismatch at D/2,
/// started from the bracket midpoint for both endpoint values. The matched
/// trajectory is sampled on the mesh of `cfg` and rescaled onto A = B.
/// Throws Error(NoBracket) when the defect does not change sign.
MatchResult match_shooting(const ProblemSpec& spec, std::pair<double, double> bracket,
                           const SolverConfig& cfg, Parity parity = Parity::Even);

}  // namespace isoresolve
