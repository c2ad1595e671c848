#include <algorithm>
#include <cmath>

#include "isoresolve/geometry.hpp"
#include "isoresolve/quadrature.hpp"

namespace isoresolve {
namespace {

constexpr int kSamples = 10;  // t = (D/2) 10^{-j/2}, j = 1..kSamples

// Remainders must fall below tol at the finest samples and must not grow
// toward the focal point beyond the cancellation floor of m + a/offset.
bool converges(const std::vector<AsymptoticSample>& samples, double tol, double power,
               double D) {
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double offset = std::min(samples[i].t, D - samples[i].t);
        const double floor = 1e-10 * (1.0 + power) / offset;
        if (std::abs(samples[i].remainder) > std::abs(samples[i - 1].remainder) + floor) {
            return false;
        }
    }
    const std::size_t tail = std::min<std::size_t>(3, samples.size());
    for (std::size_t i = samples.size() - tail; i < samples.size(); ++i) {
        if (!(std::abs(samples[i].remainder) < tol)) return false;
    }
    return true;
}

}  // namespace

AsymptoticReport validate_asymptotics(const IsoparametricProfile& profile, double tol) {
    AsymptoticReport report;
    const double D = profile.focal_distance();
    const double a0 = profile.left_power();
    const double a1 = profile.right_power();
    for (int j = 1; j <= kSamples; ++j) {
        const double offset = 0.5 * D * std::pow(10.0, -0.5 * j);
        const double m_left = profile.mean_curvature(offset);
        report.left.push_back({offset, offset * m_left + a0, m_left + a0 / offset});
        const double t = D - offset;
        const double m_right = profile.mean_curvature(t);
        report.right.push_back({t, offset * m_right - a1, m_right - a1 / offset});
    }
    report.left_pass = converges(report.left, tol, a0, D);
    report.right_pass = converges(report.right, tol, a1, D);

    // d/dt log V + m at interior Gauss nodes of a uniform partition
    const auto& rule = quadrature::gauss_legendre(4);
    constexpr int kCells = 64;
    double defect = 0.0;
    for (int c = 0; c < kCells; ++c) {
        const double lo = D * c / kCells;
        const double hi = D * (c + 1) / kCells;
        for (double x : rule.nodes) {
            const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
            const double h = 1e-5 * std::min(t, D - t);
            const double dlog = (profile.log_weight(t + h) - profile.log_weight(t - h)) / (2.0 * h);
            const double m = profile.mean_curvature(t);
            // relative to the local size of m, which is O(1/t) near the ends
            defect = std::max(defect, std::abs(dlog + m) / (1.0 + std::abs(m)));
        }
    }
    report.max_log_weight_defect = defect;
    report.weight_pass = defect < tol;
    report.pass = report.left_pass && report.right_pass && report.weight_pass;
    return report;
}

}  // namespace isoresolve
