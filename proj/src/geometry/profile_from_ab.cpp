#include "detail/pchip.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <memory>
#include <sstream>

#include <gsl/gsl_spline.h>

#include "isoresolve/error.hpp"
#include "isoresolve/geometry.hpp"
#include "isoresolve/quadrature.hpp"

namespace isoresolve {
namespace {

constexpr int kThetaPanels = 1024;
constexpr int kThetaPoints = 8;

// Arclength reparametrization t(θ) with f = f_min + Δ sin²(θ/2); the
// substitution turns the inverse-square-root endpoint singularities of
// dt/df = 1/sqrt(b) into a smooth integrand.
struct ArclengthMap {
    IsoparametricData data;
    double span = 0.0;
    std::vector<double> theta;
    std::vector<double> arclength;
    std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> inverse;

    double f_of_theta(double th) const {
        if (th <= 0.5 * std::numbers::pi) {
            const double s = std::sin(0.5 * th);
            return data.f_min + span * s * s;
        }
        const double c = std::cos(0.5 * th);
        return data.f_max - span * c * c;
    }

    double dt_dtheta(double th) const {
        const double b = data.b(f_of_theta(th));
        return 0.5 * span * std::sin(th) / std::sqrt(b);
    }

    double arclength_at(double th) const {
        const double h = std::numbers::pi / kThetaPanels;
        int panel = std::clamp(static_cast<int>(th / h), 0, kThetaPanels - 1);
        return arclength[panel] +
               quadrature::integrate([this](double x) { return dt_dtheta(x); }, theta[panel], th,
                                     kThetaPoints);
    }

    double theta_of_t(double t) const {
        double th = std::clamp((*inverse)(t), 0.0, std::numbers::pi);
        for (int iter = 0; iter < 4; ++iter) {
            const double slope = dt_dtheta(th);
            if (!(slope > 0.0) || !std::isfinite(slope)) break;
            const double step = (arclength_at(th) - t) / slope;
            th = std::clamp(th - step, 0.0, std::numbers::pi);
            if (std::abs(step) < 1e-15) break;
        }
        return th;
    }

    double b_prime(double f) const {
        if (data.b_prime) return data.b_prime(f);
        const double h = 1e-5 * span;
        if (f - h < data.f_min) {
            return (-3.0 * data.b(f) + 4.0 * data.b(f + h) - data.b(f + 2.0 * h)) / (2.0 * h);
        }
        if (f + h > data.f_max) {
            return (3.0 * data.b(f) - 4.0 * data.b(f - h) + data.b(f - 2.0 * h)) / (2.0 * h);
        }
        return (data.b(f + h) - data.b(f - h)) / (2.0 * h);
    }

    double focal = 0.0;
    double left_power = 0.0;
    double right_power = 0.0;

    double raw_mean_curvature(double t) const {
        const double f = f_of_theta(theta_of_t(t));
        return (b_prime(f) + 2.0 * data.a(f)) / (2.0 * std::sqrt(data.b(f)));
    }

    // Near a focal end b(f) loses relative accuracy like eps/(f - f_end), so
    // the bounded part m ± a/offset is extrapolated linearly from [τ, 2τ].
    double mean_curvature(double t) const {
        const double tau = 1e-3 * focal;
        if (t < tau) {
            const auto regular = [&](double x) { return raw_mean_curvature(x) + left_power / x; };
            const double r1 = regular(tau);
            const double r2 = regular(2.0 * tau);
            return -left_power / t + r1 + (r1 - r2) * (tau - t) / tau;
        }
        const double offset = focal - t;
        if (offset < tau) {
            const auto regular = [&](double x) {
                return raw_mean_curvature(focal - x) - right_power / x;
            };
            const double r1 = regular(tau);
            const double r2 = regular(2.0 * tau);
            return right_power / offset + r1 + (r1 - r2) * (tau - offset) / tau;
        }
        return raw_mean_curvature(t);
    }
};

// order p of the zero of b at an endpoint, b(f_end ± δ) ~ δ^p
double endpoint_order(const RealFn& b, double f_end, double direction, double span) {
    const double delta = 1e-4 * span;
    const double near = std::abs(b(f_end + direction * delta));
    const double far = std::abs(b(f_end + direction * 2.0 * delta));
    if (near <= 0.0 || far <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(far / near);
}

}  // namespace

IsoparametricProfile profile_from_ab(const IsoparametricData& data, int n, int d0, int d1) {
    if (!data.a || !data.b) fail(ErrorKind::InvalidArgument, "profile_from_ab: a and b required");
    if (!(data.f_max > data.f_min)) {
        fail(ErrorKind::InvalidArgument, "profile_from_ab: need f_min < f_max");
    }
    const double span = data.f_max - data.f_min;

    double b_scale = 0.0;
    for (int i = 1; i < 64; ++i) {
        const double value = data.b(data.f_min + span * i / 64.0);
        if (!(value > 0.0)) {
            fail(ErrorKind::InvalidArgument, "profile_from_ab: b must be positive inside (f_min, f_max)");
        }
        b_scale = std::max(b_scale, value);
    }
    const double b_lo = std::abs(data.b(data.f_min));
    const double b_hi = std::abs(data.b(data.f_max));
    if (b_lo > 1e-10 * b_scale || b_hi > 1e-10 * b_scale) {
        fail(ErrorKind::Integrability,
             "profile_from_ab: b must vanish at both critical values (focal endpoints)");
    }
    for (const double order : {endpoint_order(data.b, data.f_min, 1.0, span),
                               endpoint_order(data.b, data.f_max, -1.0, span)}) {
        if (order >= 1.9) {
            fail(ErrorKind::Integrability,
                 "profile_from_ab: 1/sqrt(b) is not integrable at an endpoint (infinite D)");
        }
        if (std::abs(order - 1.0) > 0.2) {
            fail(ErrorKind::InvalidArgument,
                 "profile_from_ab: only simple zeros of b at the focal endpoints are supported");
        }
    }

    auto map = std::make_shared<ArclengthMap>();
    map->data = data;
    map->span = span;
    map->theta.resize(kThetaPanels + 1);
    map->arclength.assign(kThetaPanels + 1, 0.0);
    const double h = std::numbers::pi / kThetaPanels;
    for (int j = 0; j <= kThetaPanels; ++j) map->theta[j] = j * h;
    for (int j = 0; j < kThetaPanels; ++j) {
        map->arclength[j + 1] =
            map->arclength[j] +
            quadrature::integrate([&](double x) { return map->dt_dtheta(x); }, map->theta[j],
                                  map->theta[j + 1], kThetaPoints);
    }
    const double focal = map->arclength.back();
    map->focal = focal;
    map->left_power = n - d0 - 1;
    map->right_power = n - d1 - 1;
    if (!std::isfinite(focal) || !(focal > 0.0)) {
        fail(ErrorKind::Integrability, "profile_from_ab: focal distance is not finite");
    }
    map->inverse = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
        std::vector<double>(map->arclength), std::vector<double>(map->theta));

    auto profile = IsoparametricProfile::from_mean_curvature(
        n, d0, d1, focal, [map](double t) { return map->mean_curvature(t); }, "from_ab");
    const AsymptoticReport report = validate_asymptotics(profile, 1e-3);
    if (!report.pass) {
        fail(ErrorKind::Asymptotics,
             "profile_from_ab: recovered mean curvature violates the focal asymptotic laws");
    }
    return profile;
}

namespace {

std::shared_ptr<gsl_spline> make_spline(const std::vector<double>& x, const std::vector<double>& y) {
    std::shared_ptr<gsl_spline> spline(gsl_spline_alloc(gsl_interp_cspline, x.size()), gsl_spline_free);
    gsl_spline_init(spline.get(), x.data(), y.data(), x.size());
    return spline;
}

}  // namespace

IsoparametricData read_ab_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open isoparametric table: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> f;
    std::vector<double> a;
    std::vector<double> b;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double fv = 0.0;
        double av = 0.0;
        double bv = 0.0;
        if (!(row >> fv)) continue;  // blank line
        if (!(row >> av >> bv)) {
            fail(ErrorKind::Parse, path + ":" + std::to_string(line_no) + ": expected f a b");
        }
        f.push_back(fv);
        a.push_back(av);
        b.push_back(bv);
    }
    if (f.size() < 4) fail(ErrorKind::Parse, path + ": need at least 4 rows");
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (!(f[i] > f[i - 1])) fail(ErrorKind::Parse, path + ": f column must increase strictly");
    }
    const double lo = f.front();
    const double hi = f.back();
    const double b_scale = *std::max_element(b.begin(), b.end());
    if (!(b_scale > 0.0) || std::abs(b.front()) > 1e-12 * b_scale || std::abs(b.back()) > 1e-12 * b_scale) {
        fail(ErrorKind::Integrability, path + ": b must vanish at both table endpoints");
    }
    // b has simple zeros at the ends; interpolate the smooth quotient g instead,
    // since b'/sqrt(b) amplifies interpolation error like 1/t near a focal point
    std::vector<double> g(f.size());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) g[i] = b[i] / ((f[i] - lo) * (hi - f[i]));
    auto extrapolate = [&](std::size_t i0, std::size_t i1, std::size_t i2, double x) {
        const double x0 = f[i0], x1 = f[i1], x2 = f[i2];
        return g[i0] * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
               g[i1] * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
               g[i2] * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    };
    const std::size_t last = f.size() - 1;
    g.front() = extrapolate(1, 2, 3, lo);
    g.back() = extrapolate(last - 1, last - 2, last - 3, hi);
    auto a_fit = make_spline(f, a);
    auto g_fit = make_spline(f, g);
    IsoparametricData data;
    data.f_min = lo;
    data.f_max = hi;
    data.a = [a_fit](double x) { return gsl_spline_eval(a_fit.get(), x, nullptr); };
    data.b = [g_fit, lo, hi](double x) {
        return (x - lo) * (hi - x) * gsl_spline_eval(g_fit.get(), x, nullptr);
    };
    data.b_prime = [g_fit, lo, hi](double x) {
        return (lo + hi - 2.0 * x) * gsl_spline_eval(g_fit.get(), x, nullptr) +
               (x - lo) * (hi - x) * gsl_spline_eval_deriv(g_fit.get(), x, nullptr);
    };
    return data;
}

}  // namespace isoresolve
