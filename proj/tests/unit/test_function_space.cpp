#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fstream>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "isoresolve/error.hpp"
#include "isoresolve/linalg.hpp"

using namespace isoresolve;
using fixtures::pole4;

namespace {

std::shared_ptr<const GradedMesh> mesh_for(const ProblemSpec& spec, int cells) {
    return GradedMesh::build(spec.profile, spec.s, cells, GradedMesh::default_grading(spec.s));
}

double kronrod(auto f, double lo, double hi) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
}

}  // namespace

TEST_CASE("graded mesh layout") {
    const double s = 0.5;
    const double gamma = GradedMesh::default_grading(s);
    auto mesh = GradedMesh::build(pole4(), s, 256, gamma);
    REQUIRE(mesh->size() == 257);
    for (std::size_t j = 1; j < mesh->size(); ++j) CHECK(mesh->node(j) > mesh->node(j - 1));
    CHECK(mesh->node(0) == 0.0);
    CHECK(mesh->node(256) == M_PI);
    CHECK(mesh->node(128) == M_PI / 2);
    CHECK(mesh->node(1) == doctest::Approx(M_PI / 2 * std::pow(1.0 / 128, gamma)));
    for (std::size_t j = 0; j < mesh->size(); ++j) {
        CHECK(mesh->node(j) + mesh->node(256 - j) == doctest::Approx(M_PI).epsilon(1e-15));
    }
    CHECK(mesh->mirrored());
    CHECK_THROWS_AS(GradedMesh::build(pole4(), s, 255, gamma), Error);
    CHECK_THROWS_AS(GradedMesh::build(pole4(), s, 256, 0.5), Error);
}

TEST_CASE("weighted L^q norm") {
    const ProblemSpec spec = fixtures::reference_spec();
    auto mesh = mesh_for(spec, 512);
    CHECK(weighted_lq_norm(GridFunction::zeros(mesh), spec) == 0.0);

    // s = 0, q = 2: ∫ sin³ t dt = 4/3 since V = sin³ t under V(π/2) = 1
    auto flat = GradedMesh::build(pole4(), 0.0, 512, 1.0);
    const GridFunction one = GridFunction::sample(flat, [](double) { return 1.0; });
    CHECK(std::sqrt(lq_mass(one, 2.0)) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-6));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const GridFunction u = fixtures::random_series(mesh, rng);
        const GridFunction v = fixtures::random_series(mesh, rng);
        const double nu = weighted_lq_norm(u, spec);
        CHECK(weighted_lq_norm(u.scaled(-2.5), spec) == doctest::Approx(2.5 * nu).epsilon(1e-14));
        CHECK(weighted_lq_norm(u + v, spec) <= nu + weighted_lq_norm(v, spec) + 1e-14);
    }
}

TEST_CASE("endpoint power integrals are exact") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick_n(3, 7);
    std::uniform_real_distribution<double> pick_s(0.05, 1.95);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = pick_n(rng);
        const int d0 = static_cast<int>(rng() % 2);
        const double s = pick_s(rng);
        const IsoparametricProfile p = sphere_tube_profile(n, d0);
        auto mesh = GradedMesh::build(p, s, 64, GradedMesh::default_grading(s));
        // ∫_0^{t1} V d^{-s} dt against V ≈ c t^{a0} near 0: use the exact regular factor
        const double t1 = mesh->node(1);
        double quad = 0.0;
        for (const QuadPoint& q : mesh->points(Measure::Singular, 0)) quad += q.weight;
        const double a0 = n - d0 - 1;
        const double exact = kronrod(
            [&](double x) {
                // substitute t = t1 x^{1/(a0+1-s)} to remove the endpoint power
                const double e = 1.0 / (a0 + 1.0 - s);
                const double t = t1 * std::pow(x, e);
                return p.weight_regular_left(t) * std::pow(t1, a0 + 1.0 - s) * e;
            },
            0.0, 1.0);
        CAPTURE(n);
        CAPTURE(d0);
        CAPTURE(s);
        CHECK(quad == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("quadrature is second order for smooth integrands") {
    const IsoparametricProfile& p = pole4();
    auto integral = [&](int cells) {
        auto mesh = GradedMesh::build(p, 0.5, cells, 1.0);
        const GridFunction u = GridFunction::sample(mesh, [](double t) { return std::cos(t); });
        return h1_inner(u, u);
    };
    // ∫ (sin² + cos²) sin³ dt = 4/3
    const double e1 = std::abs(integral(64) - 4.0 / 3.0);
    const double e2 = std::abs(integral(128) - 4.0 / 3.0);
    CHECK(e1 / e2 >= 4.0 * 0.9);
}

TEST_CASE("Hardy quotient is finite and refinement-stable") {
    const ProblemSpec spec = fixtures::reference_spec();
    auto value = [&](int cells, auto phi) {
        return hardy_quotient(GridFunction::sample(mesh_for(spec, cells), phi), spec);
    };
    auto dist = [](double t) { return singular_distance(t, M_PI); };
    const double a = value(512, dist);
    const double b = value(1024, dist);
    CHECK(std::isfinite(a));
    CHECK(std::abs(a - b) / b < 1e-3);
    CHECK(std::isfinite(value(512, [](double) { return 1.0; })));
    CHECK_THROWS_AS(hardy_quotient(GridFunction::zeros(mesh_for(spec, 64)), spec), Error);
    // codimension-2 focal sets make V/d² non-integrable
    const ProblemSpec s3 = make_problem(sphere_tube_profile(3, 1), 3.0, 0.5, Potential::constant(1.0));
    CHECK_THROWS_AS(hardy_quotient(GridFunction::sample(mesh_for(s3, 64), [](double) { return 1.0; }), s3),
                    Error);
}

TEST_CASE("Rayleigh quotient") {
    const ProblemSpec spec = fixtures::reference_spec();
    auto mesh = mesh_for(spec, 512);
    std::mt19937_64 rng(3);
    const GridFunction u = fixtures::random_series(mesh, rng);
    CHECK(rayleigh_Q(u.scaled(2.0), spec) == doctest::Approx(rayleigh_Q(u, spec)).epsilon(1e-14));
    CHECK(rayleigh_Q(u.scaled(-0.3), spec) == doctest::Approx(rayleigh_Q(u, spec)).epsilon(1e-14));
    CHECK_THROWS_AS(rayleigh_Q(GridFunction::zeros(mesh), spec), Error);

    // φ = 1, k = 1, s = 1, q = 3; evaluated directly since q sits on the gate boundary
    const ProblemSpec edge{pole4(), 3.0, 1.0, Potential::constant(1.0)};
    auto edge_mesh = GradedMesh::build(pole4(), 1.0, 1024, GradedMesh::default_grading(1.0));
    const GridFunction one = GridFunction::sample(edge_mesh, [](double) { return 1.0; });
    const double vol = 4.0 / 3.0;
    const double singular =
        2.0 * kronrod([](double t) { return std::pow(std::sin(t), 3) / t; }, 0.0, M_PI / 2);
    CHECK(rayleigh_Q(one, edge) == doctest::Approx(vol / std::pow(singular, 2.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("energy functional") {
    const ProblemSpec spec = fixtures::reference_spec();
    auto mesh = mesh_for(spec, 512);
    CHECK(energy_J(GridFunction::zeros(mesh), spec) == 0.0);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        GridFunction u = fixtures::random_series(mesh, rng);
        u = u.scaled(1.0 / h1_norm(u));
        for (double eps : {1e-1, 1e-2, 1e-3}) CHECK(energy_J(u.scaled(eps), spec) > 0.0);
    }
}

TEST_CASE("reflection invariance on symmetric specs") {
    const ProblemSpec spec = fixtures::reference_spec();
    auto mesh = mesh_for(spec, 512);
    std::mt19937_64 rng(9);
    const GridFunction u = GridFunction::sample(mesh, [](double t) { return 1.0 + t * t * (4.0 - t); });
    const GridFunction r = u.reflected();
    CHECK(energy_J(r, spec) == energy_J(u, spec));
    CHECK(rayleigh_Q(r, spec) == rayleigh_Q(u, spec));
    CHECK(lq_mass(r, spec.q) == lq_mass(u, spec.q));
    CHECK(h1_norm(r) == h1_norm(u));
    CHECK(hardy_quotient(r, spec) == hardy_quotient(u, spec));
}

TEST_CASE("weak residual") {
    const double D = M_PI;
    // manufactured φ* = 1 + 0.3 cos t with its strong defect as forcing
    const ProblemSpec spec = fixtures::reference_spec();
    auto phi = [](double t) { return 1.0 + 0.3 * std::cos(t); };
    const RealFn forcing = [&](double t) {
        const double m = spec.profile.mean_curvature(t);
        const double d = singular_distance(t, D);
        const double p = phi(t);
        return 0.3 * std::cos(t) + m * (-0.3 * std::sin(t)) + p - std::pow(p, 2.0) / std::pow(d, 0.5);
    };
    std::vector<double> norms;
    for (int cells : {256, 512, 1024}) {
        const GridFunction u = GridFunction::sample(mesh_for(spec, cells), phi);
        norms.push_back(residual_forced(u, spec, forcing).dual_norm);
    }
    MESSAGE("manufactured residual dual norms: " << norms[0] << " " << norms[1] << " " << norms[2]);
    CHECK(norms[0] / norms[1] >= 3.0);
    CHECK(norms[1] / norms[2] >= 3.0);
    CHECK(norms[2] < 1e-5);

    // φ = 1, k = 0: the bare nonlinear load
    const ProblemSpec free{pole4(), 3.0, 0.5, Potential::constant(0.0)};
    auto mesh = mesh_for(free, 256);
    const GridFunction one = GridFunction::sample(mesh, [](double) { return 1.0; });
    const Residual r = residual(one, free);
    const std::vector<double> load = nonlinear_load(one, 3.0);
    const std::vector<double> g = h1_gram(*mesh).solve(load);
    CHECK(r.dual_norm == doctest::Approx(std::sqrt(dot(load, g))).epsilon(1e-12));
    CHECK(r.dual_norm > 0.0);
}

TEST_CASE("gradient of J") {
    const ProblemSpec spec = fixtures::reference_spec();
    auto mesh = mesh_for(spec, 512);
    const GridFunction g0 = gradient_J(GridFunction::zeros(mesh), spec);
    CHECK(g0.sup_norm() == 0.0);

    std::mt19937_64 rng(2024);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const GridFunction u = fixtures::random_series(mesh, rng);
        const GridFunction v = fixtures::random_series(mesh, rng);
        const double fd = (energy_J(u + v.scaled(h), spec) - energy_J(u - v.scaled(h), spec)) / (2 * h);
        const double an = h1_inner(gradient_J(u, spec), v);
        CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
    }
}

TEST_CASE("coercivity certificate") {
    const IsoparametricProfile& p = pole4();
    auto mesh = GradedMesh::build(p, 0.5, 256, GradedMesh::default_grading(0.5));
    const ProblemSpec positive = make_problem(p, 3.0, 0.5, Potential::constant(1.0));
    const CoercivityCertificate c1 = coercivity_check(positive, *mesh);
    CHECK(c1.pass);
    CHECK(c1.lambda_min > 0.0);
    CHECK(c1.lambda_min <= 1.0 + 1e-12);

    const ProblemSpec hugely_negative = make_problem(p, 3.0, 0.5, Potential::constant(-1e6));
    const CoercivityCertificate c2 = coercivity_check(hugely_negative, *mesh);
    CHECK_FALSE(c2.pass);
    CHECK(c2.lambda_min < 0.0);

    // any negative constant fails: the constant function has A = k ∫ V < 0
    const ProblemSpec mild = make_problem(p, 3.0, 0.5, Potential::constant(-2.0));
    const CoercivityCertificate c3 = coercivity_check(mild, *mesh);
    CHECK_FALSE(c3.pass);
    CHECK(c3.lambda_min == doctest::Approx(-2.0).epsilon(1e-8));

    // sign-changing k with a coercive form, against a dense eigensolve
    const ProblemSpec mixed = make_problem(
        p, 3.0, 0.5, Potential::function([](double t) { return 1.0 + 1.5 * std::cos(t); }, "1 + 1.5 cos t"));
    const CoercivityCertificate c4 = coercivity_check(mixed, *mesh);
    const Tridiagonal K = energy_matrix(*mesh, mixed.k);
    const Tridiagonal& G = h1_gram(*mesh);
    const auto n = static_cast<Eigen::Index>(mesh->size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, i) = K.diag[i];
        B(i, i) = G.diag[i];
        if (i + 1 < n) {
            A(i + 1, i) = A(i, i + 1) = K.lower[i];
            B(i + 1, i) = B(i, i + 1) = G.lower[i];
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, B);
    CHECK(c4.lambda_min == doctest::Approx(eig.eigenvalues()[0]).epsilon(1e-8));
    CHECK(c4.pass == (eig.eigenvalues()[0] > 0.0));
}

TEST_CASE("grid function CSV round trip") {
    const ProblemSpec spec = fixtures::reference_spec();
    auto mesh = mesh_for(spec, 64);
    const GridFunction u = GridFunction::sample(mesh, [](double t) { return std::exp(-t) / 3.0; });
    const auto dir = fixtures::scratch_dir("csv");
    const std::string path = (dir / "u.csv").string();
    write_csv(u, path);
    const std::vector<GridFunctionRow> rows = read_csv(path);
    REQUIRE(rows.size() == u.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        CHECK(rows[j].t == mesh->node(j));
        CHECK(rows[j].phi == u[j]);
    }
    std::ofstream(dir / "bad.csv") << "t,phi,V,d\n0,1,x,0\n";
    CHECK_THROWS_AS(read_csv((dir / "bad.csv").string()), Error);
}

TEST_CASE("problem gate") {
    CHECK_NOTHROW(make_problem(pole4(), 3.4, 0.5, Potential::constant(1.0)));
    CHECK_THROWS_AS(make_problem(pole4(), 3.5, 0.5, Potential::constant(1.0)), Error);
    CHECK_THROWS_AS(make_problem(pole4(), 2.0, 0.5, Potential::constant(1.0)), Error);
    CHECK_THROWS_AS(make_problem(pole4(), 3.0, 2.0, Potential::constant(1.0)), Error);
    const Potential table = Potential::table({0.0, 1.0, 2.0, M_PI}, {1.0, 2.0, 2.0, 3.0});
    CHECK(table(0.5) >= 1.0);
    CHECK(table(0.5) <= 2.0);
    CHECK(table(1.5) == doctest::Approx(2.0));
}
