#pragma once

#include <memory>
#include <span>
#include <vector>

#include "isoresolve/geometry.hpp"
#include "isoresolve/linalg.hpp"

namespace isoresolve {

/// Quadrature point on a cell: the P1 interpolant there is
/// left * φ_L + right * φ_R, and `weight` already includes the measure.
struct QuadPoint {
    double t;
    double left;
    double right;
    double weight;
};

/// Measures integrated by the mesh quadrature.
enum class Measure { Volume, Singular, Hardy };  // V dt, V d^{-s} dt, V d^{-2} dt

/// Graded mesh on [0, D] with nodes t_j = (D/2) (j/M)^γ on the left half,
/// mirrored on the right, so D/2 is always a node and t_1 = O(N^{-γ}).
/// Interior cells use Gauss–Legendre; the two focal cells use Gauss–Jacobi
/// rules for the exact local power of each measure. On symmetric profiles
/// the right half copies the left half's rules, so mirrored functions have
/// bitwise-equal cell contributions.
class GradedMesh {
public:
    static constexpr int kInteriorPoints = 6;
    static constexpr int kFocalPoints = 8;

    /// Throws Error(InvalidArgument) unless cells is even and >= 4, γ >= 1
    /// and 0 <= s < 2.
    static std::shared_ptr<const GradedMesh> build(const IsoparametricProfile& profile, double s,
                                                   int cells, double grading);

    /// γ = 2 / (2 - s).
    static double default_grading(double s) { return 2.0 / (2.0 - s); }

    const IsoparametricProfile& profile() const { return profile_; }
    double s() const { return s_; }
    double grading() const { return grading_; }
    int cells() const { return static_cast<int>(nodes_.size()) - 1; }
    std::size_t size() const { return nodes_.size(); }
    std::span<const double> nodes() const { return nodes_; }
    double node(std::size_t j) const { return nodes_[j]; }
    double width(int cell) const { return widths_[cell]; }
    /// ∫_cell V dt
    double cell_volume(int cell) const { return cell_volume_[cell]; }
    bool mirrored() const { return mirrored_; }
    bool has_hardy_measure() const { return has_hardy_; }

    std::span<const QuadPoint> points(Measure measure, int cell) const;

    /// ∫ (ψ_i'ψ_j' + ψ_iψ_j) V dt
    const Tridiagonal& h1_gram() const { return gram_; }

private:
    explicit GradedMesh(const IsoparametricProfile& profile) : profile_(profile) {}

    struct Rules {
        std::vector<QuadPoint> points;
        std::vector<int> offsets;
    };
    const Rules& rules(Measure measure) const;

    IsoparametricProfile profile_;
    double s_ = 0.0;
    double grading_ = 1.0;
    bool mirrored_ = false;
    bool has_hardy_ = false;
    std::vector<double> nodes_;
    std::vector<double> widths_;
    std::vector<double> cell_volume_;
    Rules volume_;
    Rules singular_;
    Rules hardy_;
    Tridiagonal gram_;
};

/// Sum of per-cell values combined in mirrored pairs (c, N-1-c), so the
/// total is invariant, bit for bit, under reversing the cell order.
double mirrored_sum(std::span<const double> per_cell);

}  // namespace isoresolve
