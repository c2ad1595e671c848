#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <utility>

#include "isoresolve/error.hpp"
#include "isoresolve/geometry.hpp"
#include "isoresolve/quadrature.hpp"

namespace isoresolve {
namespace {

constexpr int kPanels = 256;   // must be even: D/2 is a panel boundary
constexpr int kPanelPoints = 16;

}  // namespace

struct IsoparametricProfile::Impl {
    int n = 0;
    int d0 = 0;
    int d1 = 0;
    double D = 0.0;
    RealFn m;
    std::string label;
    int a0 = 0;
    int a1 = 0;
    double panel_width = 0.0;
    std::vector<double> cumulative;  // L at panel boundaries, L(D/2) = 0
    double log_norm = 0.0;           // a0 log(D/2) + a1 log(D/2)
    bool symmetric = false;

    // m with both focal poles removed; bounded on [0, D] for valid profiles
    double remainder(double t) const { return m(t) + a0 / t - a1 / (D - t); }

    double remainder_integral(double lo, double hi) const {
        return quadrature::integrate([this](double x) { return remainder(x); }, lo, hi,
                                     kPanelPoints);
    }

    // L(t) = -∫_{D/2}^t R
    double log_remainder(double t) const {
        int panel = static_cast<int>(std::floor(t / panel_width));
        panel = std::clamp(panel, 0, kPanels - 1);
        // integrate from the nearer boundary of the panel
        const double left = panel * panel_width;
        const double right = (panel + 1) * panel_width;
        if (t - left <= right - t) {
            return cumulative[panel] - remainder_integral(left, t);
        }
        return cumulative[panel + 1] + remainder_integral(t, right);
    }
};

IsoparametricProfile IsoparametricProfile::from_mean_curvature(int n, int d0, int d1,
                                                               double focal_distance,
                                                               RealFn mean_curvature,
                                                               std::string label) {
    if (n < 3) fail(ErrorKind::InvalidArgument, "ambient dimension must be at least 3");
    if (d0 < 0 || d1 < 0) fail(ErrorKind::InvalidArgument, "focal dimensions must be nonnegative");
    if (n - d0 < 2 || n - d1 < 2) {
        fail(ErrorKind::Properness,
             "focal submanifolds must have codimension at least 2 (n - d_i >= 2)");
    }
    if (!(focal_distance > 0.0) || !std::isfinite(focal_distance)) {
        fail(ErrorKind::InvalidArgument, "focal distance must be positive and finite");
    }
    if (!mean_curvature) fail(ErrorKind::InvalidArgument, "mean curvature evaluator is empty");

    auto impl = std::make_shared<Impl>();
    impl->n = n;
    impl->d0 = d0;
    impl->d1 = d1;
    impl->D = focal_distance;
    impl->m = std::move(mean_curvature);
    impl->label = std::move(label);
    impl->a0 = n - d0 - 1;
    impl->a1 = n - d1 - 1;
    impl->panel_width = focal_distance / kPanels;
    impl->log_norm = (impl->a0 + impl->a1) * std::log(0.5 * focal_distance);

    impl->cumulative.assign(kPanels + 1, 0.0);
    const int mid = kPanels / 2;
    for (int p = mid; p < kPanels; ++p) {
        impl->cumulative[p + 1] =
            impl->cumulative[p] -
            impl->remainder_integral(p * impl->panel_width, (p + 1) * impl->panel_width);
    }
    for (int p = mid; p > 0; --p) {
        impl->cumulative[p - 1] =
            impl->cumulative[p] +
            impl->remainder_integral((p - 1) * impl->panel_width, p * impl->panel_width);
    }

    bool symmetric = d0 == d1;
    for (int i = 1; symmetric && i < 64; ++i) {
        const double t = focal_distance * i / 128.0;
        const double lhs = impl->m(t);
        const double rhs = impl->m(focal_distance - t);
        if (std::abs(lhs + rhs) > 1e-10 * (1.0 + std::abs(lhs))) symmetric = false;
    }
    impl->symmetric = symmetric;
    return IsoparametricProfile(std::move(impl));
}

int IsoparametricProfile::n() const { return impl_->n; }
int IsoparametricProfile::d0() const { return impl_->d0; }
int IsoparametricProfile::d1() const { return impl_->d1; }
int IsoparametricProfile::k_f() const { return std::min(impl_->d0, impl_->d1); }
double IsoparametricProfile::focal_distance() const { return impl_->D; }
const std::string& IsoparametricProfile::label() const { return impl_->label; }
int IsoparametricProfile::left_power() const { return impl_->a0; }
int IsoparametricProfile::right_power() const { return impl_->a1; }
bool IsoparametricProfile::is_symmetric() const { return impl_->symmetric; }

double IsoparametricProfile::mean_curvature(double t) const { return impl_->m(t); }

double IsoparametricProfile::log_weight(double t) const {
    const Impl& p = *impl_;
    return p.a0 * std::log(t) + p.a1 * std::log(p.D - t) + p.log_remainder(t) - p.log_norm;
}

double IsoparametricProfile::weight(double t) const {
    const Impl& p = *impl_;
    if (t <= 0.0 || t >= p.D) {
        // the weight vanishes at the focal points for proper profiles
        return 0.0;
    }
    return std::exp(log_weight(t));
}

double IsoparametricProfile::weight_regular_left(double t) const {
    const Impl& p = *impl_;
    return std::exp(p.a1 * std::log(p.D - t) + p.log_remainder(t) - p.log_norm);
}

double IsoparametricProfile::weight_regular_right(double t) const {
    const Impl& p = *impl_;
    return std::exp(p.a0 * std::log(t) + p.log_remainder(t) - p.log_norm);
}

IsoparametricProfile sphere_tube_profile(int n, int d0) {
    if (n < 3) fail(ErrorKind::InvalidArgument, "sphere_tube_profile: n must be at least 3");
    if (d0 < 0 || d0 > n - 2) {
        fail(ErrorKind::Properness, "sphere_tube_profile: need 0 <= d0 <= n - 2");
    }
    if (d0 == 0) {
        const double c = n - 1.0;
        return IsoparametricProfile::from_mean_curvature(
            n, 0, 0, std::numbers::pi, [c](double t) { return -c / std::tan(t); },
            "pole(n=" + std::to_string(n) + ")");
    }
    const double c = n - d0 - 1.0;
    const double e = d0;
    return IsoparametricProfile::from_mean_curvature(
        n, d0, n - d0 - 1, 0.5 * std::numbers::pi,
        [c, e](double t) { return -c / std::tan(t) + e * std::tan(t); },
        "sphere_tube(n=" + std::to_string(n) + ",d0=" + std::to_string(d0) + ")");
}

bool ExponentReport::admissible(double q) const {
    if (!(q > 2.0)) return false;
    return bounded ? q < critical : true;
}

std::string ExponentReport::describe() const {
    if (bounded) {
        return "q must satisfy 2 < q < 2*_f(s) = " + std::to_string(critical) +
               " (strict subcriticality)";
    }
    return "n - k_f <= 2: every q > 2 is admissible";
}

ExponentReport critical_exponent(const IsoparametricProfile& profile, double s) {
    if (!(s > 0.0 && s < 2.0)) {
        fail(ErrorKind::InvalidArgument, "singularity exponent s must lie in (0, 2)");
    }
    ExponentReport report;
    report.s = s;
    const int reduced = profile.n() - profile.k_f();
    if (reduced > 2) {
        report.bounded = true;
        report.critical = 2.0 * (reduced - s) / (reduced - 2.0);
    } else {
        report.bounded = false;
        report.critical = std::numeric_limits<double>::infinity();
    }
    return report;
}

}  // namespace isoresolve
