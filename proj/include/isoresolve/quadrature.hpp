#pragma once

#include <vector>

namespace isoresolve::quadrature {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Cached p-point Gauss–Legendre rule, 1 <= p <= 64.
const Rule& gauss_legendre(int points);

/// Gauss–Jacobi rule for the weight (1 - x)^alpha (1 + x)^beta on [-1, 1],
/// computed by Golub–Welsch; alpha, beta > -1.
Rule gauss_jacobi(int points, double alpha, double beta);

/// ∫_lo^hi f(x) dx with a p-point Gauss–Legendre rule.
template <typename F>
double integrate(F&& f, double lo, double hi, int points = 16) {
    const Rule& rule = gauss_legendre(points);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

}  // namespace isoresolve::quadrature
