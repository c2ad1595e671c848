#include <cmath>

#include "isoresolve/error.hpp"
#include "isoresolve/mesh.hpp"
#include "isoresolve/quadrature.hpp"

namespace isoresolve {
namespace {

struct PointSet {
    std::vector<double> t;
    std::vector<double> base;  // Gauss weight times the measure divided by V
    std::vector<double> left;
    std::vector<double> right;
};

// Gauss–Legendre points on [lo, hi]
PointSet interior_points(double lo, double hi) {
    const auto& rule = quadrature::gauss_legendre(GradedMesh::kInteriorPoints);
    PointSet set;
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        set.t.push_back(0.5 * (lo + hi) + half * x);
        set.base.push_back(half * rule.weights[i]);
        set.left.push_back(0.5 * (1.0 - x));
        set.right.push_back(0.5 * (1.0 + x));
    }
    return set;
}

// ∫_0^h t^power g(t) dt with a Gauss–Jacobi rule; base holds the weights
// for g, so the caller multiplies by the regular factor only.
PointSet focal_points(double h, double power) {
    const auto rule = quadrature::gauss_jacobi(GradedMesh::kFocalPoints, 0.0, power);
    PointSet set;
    const double scale = std::pow(0.5 * h, power + 1.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        set.t.push_back(0.5 * h * (1.0 + x));
        set.base.push_back(scale * rule.weights[i]);
        set.left.push_back(0.5 * (1.0 - x));
        set.right.push_back(0.5 * (1.0 + x));
    }
    return set;
}

}  // namespace

std::shared_ptr<const GradedMesh> GradedMesh::build(const IsoparametricProfile& profile, double s,
                                                    int cells, double grading) {
    if (cells < 4 || cells % 2 != 0) {
        fail(ErrorKind::InvalidArgument, "mesh: cell count must be even and at least 4");
    }
    if (!(grading >= 1.0)) fail(ErrorKind::InvalidArgument, "mesh: grading exponent must be >= 1");
    if (!(s >= 0.0 && s < 2.0)) fail(ErrorKind::InvalidArgument, "mesh: need 0 <= s < 2");

    std::shared_ptr<GradedMesh> mesh(new GradedMesh(profile));
    mesh->s_ = s;
    mesh->grading_ = grading;
    mesh->mirrored_ = profile.is_symmetric();
    const double D = profile.focal_distance();
    const double half = 0.5 * D;
    const double a0 = profile.left_power();
    const double a1 = profile.right_power();
    mesh->has_hardy_ = a0 - 2.0 > -1.0 && a1 - 2.0 > -1.0;

    const int M = cells / 2;
    mesh->nodes_.resize(cells + 1);
    for (int j = 0; j <= M; ++j) {
        mesh->nodes_[j] = half * std::pow(static_cast<double>(j) / M, grading);
    }
    mesh->nodes_[M] = half;
    for (int j = 0; j < M; ++j) {
        mesh->nodes_[cells - j] = D - mesh->nodes_[j];
    }
    mesh->widths_.resize(cells);
    for (int c = 0; c < cells; ++c) {
        mesh->widths_[c] = mesh->nodes_[c + 1] - mesh->nodes_[c];
    }
    // mirrored cells use the left-half width so slopes match bitwise
    for (int c = 0; c < M; ++c) mesh->widths_[cells - 1 - c] = mesh->widths_[c];

    const Measure measures[] = {Measure::Volume, Measure::Singular, Measure::Hardy};
    auto power_for = [&](Measure measure) {
        switch (measure) {
            case Measure::Volume: return 0.0;
            case Measure::Singular: return s;
            case Measure::Hardy: return 2.0;
        }
        return 0.0;
    };
    auto rules_for = [&](Measure measure) -> Rules& {
        switch (measure) {
            case Measure::Volume: return mesh->volume_;
            case Measure::Singular: return mesh->singular_;
            case Measure::Hardy: return mesh->hardy_;
        }
        return mesh->volume_;
    };

    for (Measure measure : measures) {
        Rules& rules = rules_for(measure);
        rules.offsets.assign(cells + 1, 0);
        if (measure == Measure::Hardy && !mesh->has_hardy_) continue;
        const double sing = power_for(measure);
        std::vector<std::vector<QuadPoint>> per_cell(cells);
        const int last_computed = mesh->mirrored_ ? M - 1 : cells - 1;
        for (int c = 0; c <= last_computed; ++c) {
            const double lo = mesh->nodes_[c];
            const double hi = mesh->nodes_[c + 1];
            std::vector<QuadPoint>& out = per_cell[c];
            if (c == 0) {
                const PointSet set = focal_points(hi - lo, a0 - sing);
                for (std::size_t i = 0; i < set.t.size(); ++i) {
                    const double t = set.t[i];
                    out.push_back({t, set.left[i], set.right[i],
                                   set.base[i] * profile.weight_regular_left(t)});
                }
            } else if (c == cells - 1) {
                const double h = hi - lo;
                const PointSet set = focal_points(h, a1 - sing);
                for (std::size_t i = 0; i < set.t.size(); ++i) {
                    const double t = D - set.t[i];
                    // mirrored Jacobi point: offset from D, basis swapped
                    out.push_back({t, set.right[i], set.left[i],
                                   set.base[i] * profile.weight_regular_right(t)});
                }
            } else {
                const PointSet set = interior_points(lo, hi);
                for (std::size_t i = 0; i < set.t.size(); ++i) {
                    const double t = set.t[i];
                    const double d = singular_distance(t, D);
                    const double factor = sing == 0.0 ? 1.0 : std::pow(d, -sing);
                    out.push_back({t, set.left[i], set.right[i],
                                   set.base[i] * profile.weight(t) * factor});
                }
            }
        }
        if (mesh->mirrored_) {
            for (int c = 0; c < M; ++c) {
                std::vector<QuadPoint>& out = per_cell[cells - 1 - c];
                for (const QuadPoint& p : per_cell[c]) {
                    out.push_back({D - p.t, p.right, p.left, p.weight});
                }
            }
        }
        for (int c = 0; c < cells; ++c) {
            rules.offsets[c + 1] = rules.offsets[c] + static_cast<int>(per_cell[c].size());
            rules.points.insert(rules.points.end(), per_cell[c].begin(), per_cell[c].end());
        }
    }

    mesh->cell_volume_.resize(cells);
    for (int c = 0; c < cells; ++c) {
        double sum = 0.0;
        for (const QuadPoint& p : mesh->points(Measure::Volume, c)) sum += p.weight;
        mesh->cell_volume_[c] = sum;
    }

    mesh->gram_ = Tridiagonal(cells + 1);
    for (int c = 0; c < cells; ++c) {
        const double h = mesh->widths_[c];
        const double stiff = mesh->cell_volume_[c] / (h * h);
        double ll = 0.0;
        double lr = 0.0;
        double rr = 0.0;
        for (const QuadPoint& p : mesh->points(Measure::Volume, c)) {
            ll += p.weight * p.left * p.left;
            lr += p.weight * p.left * p.right;
            rr += p.weight * p.right * p.right;
        }
        mesh->gram_.diag[c] += stiff + ll;
        mesh->gram_.diag[c + 1] += stiff + rr;
        mesh->gram_.lower[c] = -stiff + lr;
        mesh->gram_.upper[c] = -stiff + lr;
    }
    return mesh;
}

const GradedMesh::Rules& GradedMesh::rules(Measure measure) const {
    switch (measure) {
        case Measure::Volume: return volume_;
        case Measure::Singular: return singular_;
        case Measure::Hardy: return hardy_;
    }
    return volume_;
}

std::span<const QuadPoint> GradedMesh::points(Measure measure, int cell) const {
    if (measure == Measure::Hardy && !has_hardy_) {
        fail(ErrorKind::Integrability,
             "Hardy measure V/d^2 is not integrable for focal codimension 2");
    }
    const Rules& r = rules(measure);
    const int lo = r.offsets[cell];
    const int hi = r.offsets[cell + 1];
    return {r.points.data() + lo, static_cast<std::size_t>(hi - lo)};
}

double mirrored_sum(std::span<const double> per_cell) {
    const std::size_t n = per_cell.size();
    double sum = 0.0;
    for (std::size_t c = 0; c < n / 2; ++c) {
        sum += per_cell[c] + per_cell[n - 1 - c];
    }
    if (n % 2 == 1) sum += per_cell[n / 2];
    return sum;
}

}  // namespace isoresolve
