#include "isoresolve/shooting.hpp"

#include <cmath>

#include <algorithm>
#include <array>
#include <memory>

#include <boost/math/tools/toms748_solve.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include "isoresolve/error.hpp"

namespace isoresolve {
namespace {

// The reduced ODE in the distance τ from the starting endpoint:
// φ'' = m̃ φ' + k̃ φ - |φ|^{q-2} φ / d^s.
struct Reduced {
    const ProblemSpec* spec;
    Side side;
    double D;

    double drift(double tau) const {
        return side == Side::Left ? spec->profile.mean_curvature(tau)
                                  : -spec->profile.mean_curvature(D - tau);
    }
    double potential(double tau) const {
        return side == Side::Left ? spec->k(tau) : spec->k(D - tau);
    }
    double distance(double tau) const { return singular_distance(tau, D); }

    static int rhs(double tau, const double x[], double dxdt[], void* self) {
        const auto& f = *static_cast<const Reduced*>(self);
        const double q = f.spec->q;
        dxdt[0] = x[1];
        dxdt[1] = f.drift(tau) * x[1] + f.potential(tau) * x[0] -
                  std::pow(std::abs(x[0]), q - 2.0) * x[0] / std::pow(f.distance(tau), f.spec->s);
        return GSL_SUCCESS;
    }

    static int jacobian(double tau, const double x[], double* jac, double dfdt[], void* self) {
        const auto& f = *static_cast<const Reduced*>(self);
        const double q = f.spec->q;
        const double s = f.spec->s;
        const double d = f.distance(tau);
        const double ds = std::pow(d, s);
        jac[0] = 0.0;
        jac[1] = 1.0;
        jac[2] = f.potential(tau) - (q - 1.0) * std::pow(std::abs(x[0]), q - 2.0) / ds;
        jac[3] = f.drift(tau);
        const double h = 1e-6 * std::min(tau, f.D - tau);
        const double dm = (f.drift(tau + h) - f.drift(tau - h)) / (2.0 * h);
        const double dk = (f.potential(tau + h) - f.potential(tau - h)) / (2.0 * h);
        const double dd = tau < 0.5 * f.D ? 1.0 : -1.0;
        dfdt[0] = 0.0;
        dfdt[1] = dm * x[1] + dk * x[0] +
                  s * std::pow(std::abs(x[0]), q - 2.0) * x[0] / (ds * d) * dd;
        return GSL_SUCCESS;
    }
};

struct Startup {
    double beta;  // 2 - s
    double singular;
    double quadratic;
};

Startup startup_coefficients(const ProblemSpec& spec, double phi0, Side side) {
    const IsoparametricProfile& p = spec.profile;
    const double dim = side == Side::Left ? p.n() - p.d0() : p.n() - p.d1();  // a + 1
    const double k_end = side == Side::Left ? spec.k(0.0) : spec.k(p.focal_distance());
    const double beta = 2.0 - spec.s;
    return {beta, -std::pow(phi0, spec.q - 1.0) / (beta * (dim - spec.s)),
            k_end * phi0 / (2.0 * dim)};
}

double default_t_start(const ProblemSpec& spec) {
    return solver_mesh(spec, SolverConfig{})->node(1);
}

}  // namespace

std::pair<double, double> startup_expansion(const ProblemSpec& spec, double phi0, double tau,
                                            Side side) {
    const Startup c = startup_coefficients(spec, phi0, side);
    const double value = phi0 + c.singular * std::pow(tau, c.beta) + c.quadratic * tau * tau;
    const double slope =
        c.singular * c.beta * std::pow(tau, c.beta - 1.0) + 2.0 * c.quadratic * tau;
    return {value, slope};
}

ShootState shoot_from_zero(const ProblemSpec& spec, double phi0, const ShootOptions& options) {
    if (!(phi0 > 0.0) || !std::isfinite(phi0)) {
        fail(ErrorKind::InvalidArgument,
             "shoot_from_zero: phi0 must be positive (u == 0 or u > 0)");
    }
    const double D = spec.profile.focal_distance();
    ShootState st;
    st.side = options.side;
    st.phi0 = phi0;
    st.t_start = options.t_start > 0.0 ? options.t_start : default_t_start(spec);
    st.t_end = options.t_end > 0.0 ? options.t_end : 0.5 * D;
    if (!(st.t_start < st.t_end)) {
        fail(ErrorKind::InvalidArgument, "shoot_from_zero: t_start must be below t_end");
    }
    const Startup c = startup_coefficients(spec, phi0, options.side);
    st.singular_coefficient = c.singular;
    st.quadratic_coefficient = c.quadratic;
    std::tie(st.start_value, st.start_slope) =
        startup_expansion(spec, phi0, st.t_start, options.side);

    static const gsl_error_handler_t* previous = gsl_set_error_handler_off();  // report by status
    (void)previous;
    Reduced ode{&spec, options.side, D};
    gsl_odeiv2_system sys{&Reduced::rhs, &Reduced::jacobian, 2, &ode};
    const std::unique_ptr<gsl_odeiv2_driver, decltype(&gsl_odeiv2_driver_free)> driver(
        gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_msbdf, 1e-3 * st.t_start,
                                      options.abs_tol, options.rel_tol),
        &gsl_odeiv2_driver_free);
    gsl_odeiv2_driver_set_hmax(driver.get(), D / 32.0);

    const auto& rec = options.record_at;
    std::size_t next = 0;
    for (; next < rec.size() && rec[next] <= st.t_start; ++next) {
        const auto [v, s] = startup_expansion(spec, phi0, rec[next], options.side);
        st.trace_t.push_back(rec[next]);
        st.trace_phi.push_back(rec[next] > 0.0 ? v : phi0);
        st.trace_slope.push_back(rec[next] > 0.0 ? s : 0.0);
    }

    // stop points: requested samples plus a uniform checkpoint grid for blow-up detection
    std::vector<double> targets(rec.begin() + static_cast<std::ptrdiff_t>(next), rec.end());
    constexpr int kCheckpoints = 32;
    for (int i = 1; i < kCheckpoints; ++i) {
        targets.push_back(st.t_start + (st.t_end - st.t_start) * i / kCheckpoints);
    }
    targets.push_back(st.t_end);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::remove_if(targets.begin(), targets.end(),
                                 [&](double x) { return x > st.t_end; }),
                  targets.end());

    double tau = st.t_start;
    double y[2] = {st.start_value, st.start_slope};
    for (const double target : targets) {
        if (target > tau) {
            const int status = gsl_odeiv2_driver_apply(driver.get(), &tau, target, y);
            if (status != GSL_SUCCESS || !std::isfinite(y[0]) || std::abs(y[0]) > options.blowup) {
                st.blew_up = true;
                st.blowup_distance = tau;
                st.end_value = y[0];
                st.end_slope = y[1];
                st.steps = static_cast<int>(driver->n);
                return st;
            }
        }
        if (next < rec.size() && rec[next] == target) {
            st.trace_t.push_back(target);
            st.trace_phi.push_back(y[0]);
            st.trace_slope.push_back(y[1]);
            ++next;
        }
    }
    st.end_value = y[0];
    st.end_slope = y[1];
    st.steps = static_cast<int>(driver->n);
    return st;
}

MatchResult match_shooting(const ProblemSpec& spec, std::pair<double, double> bracket,
                           const SolverConfig& cfg, Parity parity) {
    auto [lo, hi] = bracket;
    if (!(lo > 0.0) || !(hi > lo)) {
        fail(ErrorKind::InvalidArgument, "match_shooting: need 0 < lo < hi");
    }
    auto mesh = solver_mesh(spec, cfg);
    const std::size_t half = mesh->size() / 2;
    const double D = spec.profile.focal_distance();

    ShootOptions base;
    base.t_start = mesh->node(1);
    base.t_end = 0.5 * D;
    int evaluations = 0;
    auto shoot = [&](double phi0, Side side, bool keep) {
        ShootOptions opt = base;
        opt.side = side;
        if (keep) {
            for (std::size_t j = 0; j <= half; ++j) opt.record_at.push_back(mesh->node(j));
        }
        ++evaluations;
        return shoot_from_zero(spec, phi0, opt);
    };

    MatchResult out{SolutionRecord(GridFunction::zeros(mesh)), 0.0, 0.0, 0.0, 0, {}};
    std::vector<double> values(mesh->size());
    if (spec.profile.is_symmetric() && spec.k.is_constant()) {
        auto defect = [&](double phi0) {
            const ShootState st = shoot(phi0, Side::Left, false);
            if (st.blew_up) {
                fail(ErrorKind::NonConvergence,
                     "match_shooting: trajectory from phi0 = " + std::to_string(phi0) +
                         " blows up before D/2");
            }
            return parity == Parity::Even ? st.end_slope : st.end_value;
        };
        const double f_lo = defect(lo);
        const double f_hi = defect(hi);
        if (f_lo * f_hi > 0.0) {
            fail(ErrorKind::NoBracket, "match_shooting: defect has the same sign at phi0 = " +
                                           std::to_string(lo) + " and " + std::to_string(hi));
        }
        double root = f_lo == 0.0 ? lo : hi;
        if (f_lo != 0.0 && f_hi != 0.0) {
            std::uintmax_t max_iter = 200;
            const auto r = boost::math::tools::toms748_solve(
                defect, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
            root = 0.5 * (r.first + r.second);
        }
        out.left = shoot(root, Side::Left, true);
        out.phi0 = root;
        out.phiD = parity == Parity::Even ? root : -root;
        out.defect = std::abs(parity == Parity::Even ? out.left.end_slope : out.left.end_value);
        const double sign = parity == Parity::Even ? 1.0 : -1.0;
        for (std::size_t j = 0; j <= half; ++j) {
            values[j] = out.left.trace_phi[j];
            values[mesh->size() - 1 - j] = sign * out.left.trace_phi[j];
        }
        if (parity == Parity::Odd) values[half] = 0.0;
    } else {
        // Newton on (φ0, φ(D)) for the value and slope mismatch at D/2
        auto mismatch = [&](double a, double b) {
            const ShootState l = shoot(a, Side::Left, false);
            const ShootState r = shoot(b, Side::Right, false);
            if (l.blew_up || r.blew_up) {
                fail(ErrorKind::NonConvergence, "match_shooting: trajectory blows up before D/2");
            }
            return std::array<double, 2>{l.end_value - r.end_value, l.end_slope + r.end_slope};
        };
        double a = 0.5 * (lo + hi);
        double b = a;
        std::array<double, 2> F = mismatch(a, b);
        auto size = [](const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); };
        for (int it = 0; it < 60 && size(F) > 1e-11 * (1.0 + a + b); ++it) {
            const double ha = 1e-7 * a;
            const double hb = 1e-7 * b;
            const auto Fa = mismatch(a + ha, b);
            const auto Fb = mismatch(a, b + hb);
            const double j00 = (Fa[0] - F[0]) / ha;
            const double j10 = (Fa[1] - F[1]) / ha;
            const double j01 = (Fb[0] - F[0]) / hb;
            const double j11 = (Fb[1] - F[1]) / hb;
            const double det = j00 * j11 - j01 * j10;
            if (!(std::abs(det) > 0.0)) break;
            const double da = (j11 * F[0] - j01 * F[1]) / det;
            const double db = (-j10 * F[0] + j00 * F[1]) / det;
            double damping = 1.0;
            bool accepted = false;
            for (int k = 0; k < 20; ++k, damping *= 0.5) {
                const double na = a - damping * da;
                const double nb = b - damping * db;
                if (!(na > 0.0) || !(nb > 0.0)) continue;
                const auto Fn = mismatch(na, nb);
                if (size(Fn) < size(F)) {
                    a = na;
                    b = nb;
                    F = Fn;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        if (!(size(F) <= 1e-8 * (1.0 + a + b))) {
            fail(ErrorKind::NoBracket, "match_shooting: two-sided Newton did not match at D/2 from the bracket midpoint");
        }
        out.left = shoot(a, Side::Left, true);
        const ShootState right = shoot(b, Side::Right, true);
        out.phi0 = a;
        out.phiD = b;
        out.defect = size(F);
        for (std::size_t j = 0; j < half; ++j) {
            values[j] = out.left.trace_phi[j];
            values[mesh->size() - 1 - j] = right.trace_phi[j];
        }
        values[half] = 0.5 * (out.left.trace_phi[half] + right.trace_phi[half]);
    }
    out.evaluations = evaluations;

    GridFunction u(mesh, std::move(values));
    u = nehari_rescale(u, spec).second;
    out.record = make_record(u, spec, SolutionKind::Shooting, cfg.tol_residual, evaluations, true);
    out.record.checks.insert(out.record.checks.begin(),
                             InvariantCheck{"match_defect", out.defect, 1e-8, out.defect <= 1e-8});
    return out;
}

}  // namespace isoresolve
