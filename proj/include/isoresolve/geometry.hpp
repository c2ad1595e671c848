#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace isoresolve {

using RealFn = std::function<double(double)>;

/// Reduced geometry of a proper isoparametric function: the mean curvature
/// m(t) of the level set at distance t from the focal submanifold M0 and the
/// level-set volume weight V(t), with V'/V = -m and V(D/2) = 1.
///
/// The weight is stored in factored form
///   V(t) = c * t^{a0} * (D - t)^{a1} * exp(L(t)),
/// a0 = n - d0 - 1, a1 = n - d1 - 1, where L integrates the bounded
/// remainder of m after removing both focal poles. Quadrature near the focal
/// points uses the regular factors directly.
///
/// Profiles are immutable; copies share state.
class IsoparametricProfile {
public:
    /// Builds a profile from an arbitrary mean-curvature evaluator on (0, D).
    /// Throws Error(Properness) unless n - d0 >= 2 and n - d1 >= 2.
    static IsoparametricProfile from_mean_curvature(int n, int d0, int d1, double focal_distance,
                                                    RealFn mean_curvature, std::string label);

    int n() const;
    int d0() const;
    int d1() const;
    int k_f() const;
    double focal_distance() const;
    const std::string& label() const;

    /// Exponent of the weight at t = 0 (n - d0 - 1) and at t = D (n - d1 - 1).
    int left_power() const;
    int right_power() const;

    double mean_curvature(double t) const;
    double weight(double t) const;
    double log_weight(double t) const;
    /// V(t) / t^{a0}, smooth up to t = 0.
    double weight_regular_left(double t) const;
    /// V(t) / (D - t)^{a1}, smooth up to t = D.
    double weight_regular_right(double t) const;

    /// d0 == d1 and m(D - t) == -m(t) on a sample grid.
    bool is_symmetric() const;

    /// Identity of the shared state; equal for copies of one profile.
    const void* identity() const { return impl_.get(); }

    struct Impl;

private:
    explicit IsoparametricProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Distance to M0 ∪ M1 of the level set at distance t from M0.
inline double singular_distance(double t, double focal_distance) {
    return t <= 0.5 * focal_distance ? t : focal_distance - t;
}

/// Distance tube around a great S^{d0} in the round S^n. d0 = 0 is the pole
/// profile, m(t) = -(n-1) cot t on (0, π); otherwise D = π/2 and
/// m(t) = -(n-d0-1) cot t + d0 tan t.
IsoparametricProfile sphere_tube_profile(int n, int d0);

/// Isoparametric data ‖∇f‖² = b(f), Δf = a(f) on [f_min, f_max]. b must
/// vanish (simply) at both ends and be positive inside. When b_prime is
/// empty it is differentiated numerically.
struct IsoparametricData {
    RealFn a;
    RealFn b;
    RealFn b_prime;
    double f_min = 0.0;
    double f_max = 0.0;
};

/// Reparametrizes by arclength t(f) = ∫ dτ / sqrt(b) and sets
/// m = (b' + 2a) / (2 sqrt b). Throws Error(Integrability) when b does not
/// vanish to first order at both endpoints and Error(Asymptotics) when the
/// result fails validate_asymptotics at 1e-3.
IsoparametricProfile profile_from_ab(const IsoparametricData& data, int n, int d0, int d1);

/// Reads a whitespace or comma separated table with a header line and
/// columns f, a(f), b(f). b must vanish in the first and last rows; a and
/// b / ((f - f_min)(f_max - f)) are interpolated by cubic splines.
IsoparametricData read_ab_table(const std::string& path);

struct AsymptoticSample {
    double t;
    double scaled;     // t m(t) + (n - d0 - 1), or (D - t) m(t) - (n - d1 - 1)
    double remainder;  // A(t) = m(t) + (n - d0 - 1)/t, or Ã(t) = m(t) - (n - d1 - 1)/(D - t)
};

struct AsymptoticReport {
    bool pass = false;
    std::vector<AsymptoticSample> left;   // geometric sequence toward t = 0
    std::vector<AsymptoticSample> right;  // geometric sequence toward t = D
    double max_log_weight_defect = 0.0;   // max |V'/V + m| at interior nodes
    bool left_pass = false;
    bool right_pass = false;
    bool weight_pass = false;
};

AsymptoticReport validate_asymptotics(const IsoparametricProfile& profile, double tol);

struct ExponentReport {
    bool bounded = false;     // n - k_f > 2
    double critical = 0.0;    // 2*_f(s) when bounded, +inf otherwise
    double s = 0.0;
    /// 2 < q < critical (bounded) or q > 2 (unrestricted).
    bool admissible(double q) const;
    std::string describe() const;
};

/// Throws Error(InvalidArgument) unless 0 < s < 2.
ExponentReport critical_exponent(const IsoparametricProfile& profile, double s);

}  // namespace isoresolve
