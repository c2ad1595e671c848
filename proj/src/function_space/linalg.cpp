#include "isoresolve/linalg.hpp"

#include <cmath>
#include <utility>

#include "isoresolve/error.hpp"

namespace isoresolve {

std::vector<double> Tridiagonal::apply(const std::vector<double>& x) const {
    const std::size_t n = diag.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += lower[i - 1] * x[i - 1];
        if (i + 1 < n) v += upper[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

std::vector<double> Tridiagonal::solve(std::vector<double> b) const {
    const std::size_t n = diag.size();
    if (b.size() != n) fail(ErrorKind::InvalidArgument, "tridiagonal solve: size mismatch");
    if (n == 0) return b;
    std::vector<double> d = diag;
    std::vector<double> du = upper;
    std::vector<double> dl = lower;
    std::vector<double> du2(n > 2 ? n - 2 : 0, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) fail(ErrorKind::InvalidArgument, "tridiagonal solve: singular matrix");
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            if (i + 2 < n) du2[i] = 0.0;
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            const double bi = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bi - fact * b[i + 1];
        }
    }
    if (d[n - 1] == 0.0) fail(ErrorKind::InvalidArgument, "tridiagonal solve: singular matrix");
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t k = n - 2; k-- > 0;) {
        b[k] = (b[k] - du[k] * b[k + 1] - du2[k] * b[k + 2]) / d[k];
    }
    return b;
}

int Tridiagonal::negative_inertia() const {
    const std::size_t n = diag.size();
    int negative = 0;
    double pivot = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        pivot = i == 0 ? diag[0] : diag[i] - lower[i - 1] * lower[i - 1] / pivot;
        if (pivot == 0.0) pivot = -1e-300;
        if (pivot < 0.0) ++negative;
    }
    return negative;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

}  // namespace isoresolve
