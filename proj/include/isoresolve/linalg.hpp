#pragma once

#include <vector>

namespace isoresolve {

/// Tridiagonal matrix on the mesh nodes.
struct Tridiagonal {
    std::vector<double> lower;  // size n-1, entry (i+1, i)
    std::vector<double> diag;   // size n
    std::vector<double> upper;  // size n-1, entry (i, i+1)

    explicit Tridiagonal(std::size_t n = 0)
        : lower(n > 0 ? n - 1 : 0, 0.0), diag(n, 0.0), upper(n > 0 ? n - 1 : 0, 0.0) {}

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(const std::vector<double>& x) const;
    /// Gaussian elimination with partial pivoting (the dgtsv scheme).
    /// Throws Error(InvalidArgument) on an exactly singular pivot.
    std::vector<double> solve(std::vector<double> rhs) const;
    /// Negative pivots of the symmetric LDLᵀ factorization (Sylvester
    /// inertia), using `lower` as the off-diagonal.
    int negative_inertia() const;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace isoresolve
