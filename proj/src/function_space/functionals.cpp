#include "isoresolve/functionals.hpp"

#include <cmath>

#include "isoresolve/error.hpp"

namespace isoresolve {
namespace {

// |x|^p with a multiplication fast path for small integer exponents
class AbsPower {
public:
    explicit AbsPower(double p) : p_(p) {
        const double r = std::round(p);
        integer_ = r == p && r >= 0.0 && r <= 8.0;
        n_ = static_cast<int>(r);
    }
    double operator()(double x) const {
        const double a = std::abs(x);
        if (integer_) {
            double out = 1.0;
            for (int i = 0; i < n_; ++i) out *= a;
            return out;
        }
        return a == 0.0 ? 0.0 : std::pow(a, p_);
    }

private:
    double p_;
    bool integer_ = false;
    int n_ = 0;
};

double interp(const QuadPoint& p, const std::vector<double>& v, int cell) {
    return p.left * v[cell] + p.right * v[cell + 1];
}

double k_at(const Potential& k, double t) { return k.is_constant() ? k.constant_value() : k(t); }

}  // namespace

void require_compatible(const GridFunction& u, const ProblemSpec& spec) {
    const GradedMesh& mesh = u.mesh();
    if (mesh.profile().identity() != spec.profile.identity()) {
        fail(ErrorKind::InvalidArgument, "grid function mesh was built for a different profile");
    }
    if (mesh.s() != spec.s) {
        fail(ErrorKind::InvalidArgument, "grid function mesh was built for a different s");
    }
}

const Tridiagonal& h1_gram(const GradedMesh& mesh) { return mesh.h1_gram(); }

Tridiagonal energy_matrix(const GradedMesh& mesh, const Potential& k) {
    const int cells = mesh.cells();
    Tridiagonal out(mesh.size());
    for (int c = 0; c < cells; ++c) {
        const double h = mesh.width(c);
        const double stiff = mesh.cell_volume(c) / (h * h);
        double ll = 0.0;
        double lr = 0.0;
        double rr = 0.0;
        for (const QuadPoint& p : mesh.points(Measure::Volume, c)) {
            const double wk = p.weight * k_at(k, p.t);
            ll += wk * p.left * p.left;
            lr += wk * p.left * p.right;
            rr += wk * p.right * p.right;
        }
        out.diag[c] += stiff + ll;
        out.diag[c + 1] += stiff + rr;
        out.lower[c] = -stiff + lr;
        out.upper[c] = -stiff + lr;
    }
    return out;
}

Tridiagonal nonlinear_jacobian(const GridFunction& u, double q) {
    const GradedMesh& mesh = u.mesh();
    const int cells = mesh.cells();
    const AbsPower power(q - 2.0);
    const auto& v = u.values();
    Tridiagonal out(mesh.size());
    for (int c = 0; c < cells; ++c) {
        double ll = 0.0;
        double lr = 0.0;
        double rr = 0.0;
        for (const QuadPoint& p : mesh.points(Measure::Singular, c)) {
            const double w = (q - 1.0) * p.weight * power(interp(p, v, c));
            ll += w * p.left * p.left;
            lr += w * p.left * p.right;
            rr += w * p.right * p.right;
        }
        out.diag[c] += ll;
        out.diag[c + 1] += rr;
        out.lower[c] = lr;
        out.upper[c] = lr;
    }
    return out;
}

double h1_inner(const GridFunction& u, const GridFunction& v) {
    if (u.mesh_ptr() != v.mesh_ptr()) fail(ErrorKind::InvalidArgument, "h1_inner: mesh mismatch");
    const GradedMesh& mesh = u.mesh();
    const int cells = mesh.cells();
    std::vector<double> per_cell(cells);
    for (int c = 0; c < cells; ++c) {
        double sum = u.slope(c) * v.slope(c) * mesh.cell_volume(c);
        for (const QuadPoint& p : mesh.points(Measure::Volume, c)) {
            sum += p.weight * interp(p, u.values(), c) * interp(p, v.values(), c);
        }
        per_cell[c] = sum;
    }
    return mirrored_sum(per_cell);
}

double h1_norm(const GridFunction& u) { return std::sqrt(h1_inner(u, u)); }

double quadratic_energy(const GridFunction& u, const ProblemSpec& spec) {
    require_compatible(u, spec);
    const GradedMesh& mesh = u.mesh();
    const int cells = mesh.cells();
    std::vector<double> per_cell(cells);
    for (int c = 0; c < cells; ++c) {
        const double slope = u.slope(c);
        double sum = slope * slope * mesh.cell_volume(c);
        for (const QuadPoint& p : mesh.points(Measure::Volume, c)) {
            const double phi = interp(p, u.values(), c);
            sum += p.weight * k_at(spec.k, p.t) * phi * phi;
        }
        per_cell[c] = sum;
    }
    return mirrored_sum(per_cell);
}

double lq_mass(const GridFunction& u, double q) {
    const GradedMesh& mesh = u.mesh();
    const int cells = mesh.cells();
    const AbsPower power(q);
    std::vector<double> per_cell(cells);
    for (int c = 0; c < cells; ++c) {
        double sum = 0.0;
        for (const QuadPoint& p : mesh.points(Measure::Singular, c)) {
            sum += p.weight * power(interp(p, u.values(), c));
        }
        per_cell[c] = sum;
    }
    return mirrored_sum(per_cell);
}

double weighted_lq_norm(const GridFunction& u, const ProblemSpec& spec) {
    require_compatible(u, spec);
    return std::pow(lq_mass(u, spec.q), 1.0 / spec.q);
}

double hardy_quotient(const GridFunction& u, const ProblemSpec& spec) {
    require_compatible(u, spec);
    const GradedMesh& mesh = u.mesh();
    const int cells = mesh.cells();
    std::vector<double> per_cell(cells);
    for (int c = 0; c < cells; ++c) {
        double sum = 0.0;
        for (const QuadPoint& p : mesh.points(Measure::Hardy, c)) {
            const double phi = interp(p, u.values(), c);
            sum += p.weight * phi * phi;
        }
        per_cell[c] = sum;
    }
    const double numerator = mirrored_sum(per_cell);
    const double denominator = h1_inner(u, u);
    if (!(denominator > 0.0)) fail(ErrorKind::InvalidArgument, "hardy_quotient: zero function");
    return numerator / denominator;
}

double rayleigh_Q(const GridFunction& u, const ProblemSpec& spec) {
    const double B = lq_mass(u, spec.q);
    if (!(B > 0.0)) fail(ErrorKind::InvalidArgument, "rayleigh_Q: zero weighted L^q norm");
    return quadratic_energy(u, spec) / std::pow(B, 2.0 / spec.q);
}

double energy_J(const GridFunction& u, const ProblemSpec& spec) {
    return 0.5 * quadratic_energy(u, spec) - lq_mass(u, spec.q) / spec.q;
}

std::vector<double> nonlinear_load(const GridFunction& u, double q) {
    const GradedMesh& mesh = u.mesh();
    const int cells = mesh.cells();
    const AbsPower power(q - 2.0);
    const auto& v = u.values();
    std::vector<double> load(mesh.size(), 0.0);
    for (int c = 0; c < cells; ++c) {
        double left = 0.0;
        double right = 0.0;
        for (const QuadPoint& p : mesh.points(Measure::Singular, c)) {
            const double phi = interp(p, v, c);
            const double w = p.weight * power(phi) * phi;
            left += w * p.left;
            right += w * p.right;
        }
        load[c] += left;
        load[c + 1] += right;
    }
    return load;
}

namespace {

Residual assemble_residual(const GridFunction& u, const ProblemSpec& spec, const RealFn* forcing) {
    require_compatible(u, spec);
    const GradedMesh& mesh = u.mesh();
    const int cells = mesh.cells();
    const auto& v = u.values();
    std::vector<double> r(mesh.size(), 0.0);
    for (int c = 0; c < cells; ++c) {
        const double h = mesh.width(c);
        const double flux = u.slope(c) * mesh.cell_volume(c) / h;
        double left = -flux;
        double right = flux;
        for (const QuadPoint& p : mesh.points(Measure::Volume, c)) {
            double w = p.weight * k_at(spec.k, p.t) * interp(p, v, c);
            if (forcing) w -= p.weight * (*forcing)(p.t);
            left += w * p.left;
            right += w * p.right;
        }
        r[c] += left;
        r[c + 1] += right;
    }
    const std::vector<double> load = nonlinear_load(u, spec.q);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= load[j];
    const std::vector<double> g = mesh.h1_gram().solve(r);
    const double norm = std::sqrt(std::max(0.0, dot(r, g)));
    return Residual{GridFunction(u.mesh_ptr(), std::move(r)), norm};
}

}  // namespace

Residual residual(const GridFunction& u, const ProblemSpec& spec) {
    return assemble_residual(u, spec, nullptr);
}

Residual residual_forced(const GridFunction& u, const ProblemSpec& spec, const RealFn& forcing) {
    return assemble_residual(u, spec, &forcing);
}

GridFunction riesz(const GridFunction& dual) {
    return GridFunction(dual.mesh_ptr(), dual.mesh().h1_gram().solve(dual.values()));
}

GridFunction gradient_J(const GridFunction& u, const ProblemSpec& spec) {
    return riesz(residual(u, spec).vector);
}

}  // namespace isoresolve
