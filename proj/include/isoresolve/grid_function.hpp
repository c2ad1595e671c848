#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "isoresolve/mesh.hpp"

namespace isoresolve {

/// Continuous piecewise-linear radial profile φ on a graded mesh,
/// representing the invariant function u = φ ∘ 𝐝.
class GridFunction {
public:
    GridFunction(std::shared_ptr<const GradedMesh> mesh, std::vector<double> values);

    static GridFunction zeros(std::shared_ptr<const GradedMesh> mesh);
    static GridFunction sample(std::shared_ptr<const GradedMesh> mesh,
                               const std::function<double(double)>& phi);

    const GradedMesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const GradedMesh>& mesh_ptr() const { return mesh_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    double& operator[](std::size_t j) { return values_[j]; }

    /// Per-cell derivative (φ_{c+1} - φ_c) / h_c.
    double slope(int cell) const {
        return (values_[cell + 1] - values_[cell]) / mesh_->width(cell);
    }

    GridFunction scaled(double factor) const;
    GridFunction abs() const;
    /// u ∘ σ with σ(t) = D - t.
    GridFunction reflected() const;

    double max() const;
    double min() const;
    double sup_norm() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }

private:
    std::shared_ptr<const GradedMesh> mesh_;
    std::vector<double> values_;
};

/// Number of sign changes of the nodal values strictly inside (0, D); exact
/// zeros are skipped.
int nodal_count(const GridFunction& u);

struct GridFunctionRow {
    double t;
    double phi;
    double V;
    double d;
};

/// CSV with header `t,phi,V,d`, 17 significant digits.
void write_csv(const GridFunction& u, const std::string& path);
std::string to_csv(const GridFunction& u);
/// Throws Error(Parse) on malformed content.
std::vector<GridFunctionRow> read_csv(const std::string& path);

}  // namespace isoresolve
