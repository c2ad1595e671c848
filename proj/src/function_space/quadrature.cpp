#include "isoresolve/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <numbers>

#include "isoresolve/error.hpp"

namespace isoresolve::quadrature {
namespace {

constexpr int kMaxLegendre = 64;

double legendre_with_derivative(int p, double x, double& derivative) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= p; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    derivative = p * (x * p1 - p0) / (x * x - 1.0);
    return p1;
}

Rule build_legendre(int p) {
    Rule rule;
    if (p == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    rule.nodes.resize(p);
    rule.weights.resize(p);
    for (int i = 0; i < p; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (p + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const double value = legendre_with_derivative(p, x, dp);
            const double dx = value / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre_with_derivative(p, x, dp);
        rule.nodes[p - 1 - i] = x;
        rule.weights[p - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const Rule& gauss_legendre(int points) {
    if (points < 1 || points > kMaxLegendre) {
        fail(ErrorKind::InvalidArgument, "gauss_legendre: unsupported order");
    }
    static const std::array<Rule, kMaxLegendre + 1> cache = [] {
        std::array<Rule, kMaxLegendre + 1> rules;
        for (int p = 1; p <= kMaxLegendre; ++p) rules[p] = build_legendre(p);
        return rules;
    }();
    return cache[points];
}

Rule gauss_jacobi(int points, double alpha, double beta) {
    if (points < 1 || alpha <= -1.0 || beta <= -1.0) {
        fail(ErrorKind::InvalidArgument, "gauss_jacobi: need points >= 1 and alpha, beta > -1");
    }
    const double ab = alpha + beta;
    Eigen::VectorXd diag(points);
    Eigen::VectorXd off(points > 1 ? points - 1 : 0);
    for (int k = 0; k < points; ++k) {
        const double two_k = 2.0 * k + ab;
        if (k == 0) {
            diag(k) = (beta - alpha) / (ab + 2.0);
        } else {
            diag(k) = (beta * beta - alpha * alpha) / (two_k * (two_k + 2.0));
        }
        if (k >= 1) {
            const double kk = k;
            const double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
            const double den = two_k * two_k * (two_k + 1.0) * (two_k - 1.0);
            off(k - 1) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    Rule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (int i = 0; i < points; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace isoresolve::quadrature
