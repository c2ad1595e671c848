#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isoresolve/geometry.hpp"

namespace isoresolve {

/// Potential 𝐤 on [0, D] with K = 𝐤 ∘ 𝐝.
class Potential {
public:
    static Potential constant(double value);
    /// Monotone cubic (PCHIP) interpolation through (t_i, k_i).
    static Potential table(std::vector<double> t, std::vector<double> k);
    static Potential function(RealFn k, std::string description);

    double operator()(double t) const { return constant_ ? value_ : fn_(t); }
    bool is_constant() const { return constant_; }
    double constant_value() const { return value_; }
    const std::string& description() const { return description_; }

private:
    Potential() = default;
    bool constant_ = true;
    double value_ = 0.0;
    RealFn fn_;
    std::string description_;
};

/// Reads a two-column table (t, k) with a header line.
Potential read_potential_table(const std::string& path);

/// Analytic data of Δu + Ku = |u|^{q-2}u / d^s on the reduced interval.
struct ProblemSpec {
    IsoparametricProfile profile;
    double q;
    double s;
    Potential k;
};

/// Validates 0 < s < 2 and the exponent gate; throws Error(GateRefused)
/// naming the violated bound.
ProblemSpec make_problem(const IsoparametricProfile& profile, double q, double s, Potential k);

}  // namespace isoresolve
