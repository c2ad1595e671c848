#include "isoresolve/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "isoresolve/error.hpp"
#include "isoresolve/functionals.hpp"

namespace isoresolve {

double fd_residual_oracle(const GridFunction& u, const ProblemSpec& spec) {
    return fd_residual_oracle(u, spec, [](double) { return 0.0; });
}

double fd_residual_oracle(const GridFunction& u, const ProblemSpec& spec, const RealFn& forcing) {
    const GradedMesh& mesh = u.mesh();
    const IsoparametricProfile& profile = mesh.profile();
    const double D = profile.focal_distance();
    const auto t = mesh.nodes();
    double sup = 0.0;
    for (std::size_t j = 1; j + 1 < u.size(); ++j) {
        if (t[j] < 0.05 * D || t[j] > 0.95 * D) continue;
        const double hm = t[j] - t[j - 1];
        const double hp = t[j + 1] - t[j];
        const double second =
            2.0 * ((u[j + 1] - u[j]) / hp - (u[j] - u[j - 1]) / hm) / (hp + hm);
        const double first =
            (hm * hm * u[j + 1] - hp * hp * u[j - 1] + (hp * hp - hm * hm) * u[j]) /
            (hp * hm * (hp + hm));
        const double phi = u[j];
        const double d = singular_distance(t[j], D);
        const double strong = second - profile.mean_curvature(t[j]) * first - spec.k(t[j]) * phi +
                              std::pow(std::abs(phi), spec.q - 2.0) * phi / std::pow(d, spec.s) +
                              forcing(t[j]);
        sup = std::max(sup, std::abs(strong));
    }
    return sup;
}

HolderFit holder_fit(const GridFunction& u, double /*s*/) {
    constexpr std::size_t kNodes = 10;
    HolderFit fit;
    if (u.size() < kNodes + 1) {
        fit.message = "fewer than ten nonzero nodes";
        return fit;
    }
    const auto t = u.mesh().nodes();
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t j = 1; j <= kNodes; ++j) {
        const double increment = u[0] - u[j];
        if (!(increment > 0.0)) {
            fit.message = "nonpositive increment phi(0) - phi(t) at t = " + std::to_string(t[j]);
            return fit;
        }
        x.push_back(std::log(t[j]));
        y.push_back(std::log(increment));
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - intercept - fit.exponent * x[i];
        sse += e * e;
    }
    fit.fit_residual = std::sqrt(sse / n);
    fit.defined = true;
    fit.message = "least squares over the first ten nonzero nodes";
    return fit;
}

VerificationReport embedding_battery(const ProblemSpec& spec, int base_cells,
                                     const BatterySettings& settings) {
    VerificationReport report;
    if (settings.trials <= 0) return report;

    std::mt19937_64 rng(settings.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> coefficients(settings.trials,
                                                  std::vector<double>(settings.modes));
    for (auto& c : coefficients) {
        for (int k = 0; k < settings.modes; ++k) c[k] = normal(rng) / (1.0 + k);
    }

    const double D = spec.profile.focal_distance();
    const double gamma = GradedMesh::default_grading(spec.s);
    struct Suprema {
        double embedding = 0.0;
        double hardy = 0.0;
    };
    bool hardy_available = true;
    auto suprema_on = [&](int cells) {
        auto mesh = GradedMesh::build(spec.profile, spec.s, cells, gamma);
        hardy_available = mesh->has_hardy_measure();
        Suprema sup;
        for (const auto& c : coefficients) {
            const GridFunction u = GridFunction::sample(mesh, [&](double t) {
                double sum = 0.0;
                for (std::size_t k = 0; k < c.size(); ++k) {
                    sum += c[k] * std::cos(static_cast<double>(k) * std::numbers::pi * t / D);
                }
                return sum;
            });
            sup.embedding = std::max(sup.embedding, weighted_lq_norm(u, spec) / h1_norm(u));
            if (hardy_available) sup.hardy = std::max(sup.hardy, hardy_quotient(u, spec));
        }
        return sup;
    };

    const int fine_cells = settings.refine_factor * base_cells;
    const Suprema coarse = suprema_on(base_cells);
    const Suprema fine = suprema_on(fine_cells);

    report.add_note("battery.seed", std::to_string(settings.seed));
    report.add_note("battery.trials", std::to_string(settings.trials));
    report.add_note("battery.series", "cosine modes 0.." + std::to_string(settings.modes - 1) +
                                          ", coefficient N(0,1)/(1+k)");

    const auto add_family = [&](const std::string& name, const std::string& anchor, double a,
                                double b) {
        report.add_refinement({name + "_supremum", {base_cells, fine_cells}, {a, b}, 0.0});
        const double drift = std::abs(b - a) / a;
        report.add_check(name + "_supremum_finite", anchor, b, 0.0, std::isfinite(a) && std::isfinite(b) && a > 0.0);
        report.add_check(name + "_supremum_drift", anchor, drift, settings.drift_tolerance,
                         drift <= settings.drift_tolerance);
    };
    add_family("embedding", "continuous embedding of invariant H1 into weighted Lq",
               coarse.embedding, fine.embedding);
    if (hardy_available) {
        add_family("hardy", "Hardy inequality for the focal distance", coarse.hardy, fine.hardy);
    } else {
        report.add_note("hardy", "skipped: focal codimension 2 makes the d^-2 measure non-integrable");
    }
    return report;
}

BumpDiagnostic bump_family(const IsoparametricProfile& profile, double s, double q,
                           const std::vector<double>& epsilon, int cells) {
    constexpr double kBumpGrading = 3.0;
    auto mesh = GradedMesh::build(profile, s, cells, kBumpGrading);
    BumpDiagnostic out;
    out.q = q;
    out.epsilon = epsilon;
    const double effective_dim = profile.left_power() + 1.0;
    out.predicted_exponent = (effective_dim - s) / q - 0.5 * (effective_dim - 2.0);
    for (const double eps : epsilon) {
        const GridFunction u = GridFunction::sample(mesh, [eps](double t) {
            const double x = t / eps;
            return std::exp(-x * x);
        });
        out.ratio.push_back(std::pow(lq_mass(u, q), 1.0 / q) / h1_norm(u));
    }
    if (!out.ratio.empty()) out.growth = out.ratio.back() / out.ratio.front();
    return out;
}

double richardson_order(double coarse, double medium, double fine, double ratio) {
    const double num = std::abs(coarse - medium);
    const double den = std::abs(medium - fine);
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    return std::log(num / den) / std::log(ratio);
}

double richardson_limit(double medium, double fine, double order, double ratio) {
    return fine + (fine - medium) / (std::pow(ratio, order) - 1.0);
}

}  // namespace isoresolve
