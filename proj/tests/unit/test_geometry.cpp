#include <doctest.h>

#include <cmath>
#include <fstream>

#include "fixtures.hpp"
#include "isoresolve/error.hpp"

using namespace isoresolve;

namespace {

IsoparametricData pole_data(int n, double scale = 1.0) {
    // f = -cos(r), so ‖∇f‖² = 1 - f² and Δf = n f with the positive-Laplacian sign
    IsoparametricData data;
    data.b = [scale](double f) { return scale * scale * (1.0 - f * f); };
    data.b_prime = [scale](double f) { return -2.0 * scale * scale * f; };
    data.a = [n, scale](double f) { return scale * scale * n * f; };
    data.f_min = -1.0;
    data.f_max = 1.0;
    return data;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an isoresolve::Error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("pole profile: leading focal law and equator") {
    const IsoparametricProfile& p = fixtures::pole4();
    CHECK(p.focal_distance() == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(p.d1() == 0);
    CHECK(std::abs(1e-6 * p.mean_curvature(1e-6) + 3.0) < 1e-4);
    CHECK(std::abs(p.mean_curvature(M_PI / 2)) < 1e-12);
    CHECK(p.is_symmetric());
}

TEST_CASE("Clifford torus level is minimal") {
    const IsoparametricProfile p = sphere_tube_profile(3, 1);
    CHECK(p.focal_distance() == doctest::Approx(M_PI / 2));
    CHECK(p.d1() == 1);
    CHECK(std::abs(p.mean_curvature(M_PI / 4)) < 1e-12);
}

TEST_CASE("pole weight is a multiple of sin^3") {
    const IsoparametricProfile& p = fixtures::pole4();
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.1 + (3.0 - 0.1) * i / 200.0;
        const double ratio = p.weight(t) / std::pow(std::sin(t), 3);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK((hi - lo) / lo < 1e-6);
    // V(D/2) = 1 normalization makes the constant exactly 1
    CHECK(p.weight(M_PI / 2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sphere tubes reject non-proper focal sets") {
    CHECK(kind_of([] { sphere_tube_profile(4, 3); }) == ErrorKind::Properness);
    CHECK(kind_of([] { sphere_tube_profile(2, 0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] {
              IsoparametricProfile::from_mean_curvature(3, 2, 0, 1.0, [](double) { return 0.0; }, "x");
          }) == ErrorKind::Properness);
}

TEST_CASE("built-in profiles pass the asymptotic laws") {
    for (int n : {3, 4, 5}) {
        for (int d0 : {0, 1}) {
            CAPTURE(n);
            CAPTURE(d0);
            const AsymptoticReport r = validate_asymptotics(sphere_tube_profile(n, d0), 1e-3);
            CHECK(r.pass);
            CHECK(r.left_pass);
            CHECK(r.right_pass);
            CHECK(r.max_log_weight_defect < 1e-3);
        }
    }
}

TEST_CASE("constant curvature remainder fails the asymptotic laws") {
    const IsoparametricProfile bad = IsoparametricProfile::from_mean_curvature(
        4, 0, 0, M_PI, [](double t) { return -3.0 / t + 3.0 / (M_PI - t) + 1.0; }, "shifted");
    const AsymptoticReport r = validate_asymptotics(bad, 1e-3);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.left_pass);
    REQUIRE_FALSE(r.left.empty());
    CHECK(r.left.back().remainder == doctest::Approx(1.0 + 3.0 / M_PI).epsilon(1e-3));
}

TEST_CASE("weight is positive and log-consistent with the curvature") {
    for (int d0 : {0, 1}) {
        const IsoparametricProfile p = sphere_tube_profile(4, d0);
        const double D = p.focal_distance();
        for (int i = 1; i < 100; ++i) {
            const double t = D * i / 100.0;
            CHECK(p.weight(t) > 0.0);
            const double h = 1e-5;
            const double dlog = (p.log_weight(t + h) - p.log_weight(t - h)) / (2 * h);
            CHECK(std::abs(dlog + p.mean_curvature(t)) < 1e-6 * (1.0 + std::abs(p.mean_curvature(t))));
        }
    }
}

TEST_CASE("profile_from_ab reproduces the pole profile") {
    for (int n : {3, 4, 5}) {
        const IsoparametricProfile p = profile_from_ab(pole_data(n), n, 0, 0);
        CHECK(p.focal_distance() == doctest::Approx(M_PI).epsilon(1e-9));
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = 0.1 + (M_PI - 0.2) * i / 400.0;
            worst = std::max(worst, std::abs(p.mean_curvature(t) + (n - 1) / std::tan(t)));
        }
        CAPTURE(n);
        CHECK(worst < 1e-6);
        CHECK(validate_asymptotics(p, 1e-3).pass);
    }
}

TEST_CASE("profile_from_ab: scaling covariance of m and D") {
    const double lambda = 2.0;
    const IsoparametricProfile p1 = profile_from_ab(pole_data(4), 4, 0, 0);
    const IsoparametricProfile p2 = profile_from_ab(pole_data(4, lambda), 4, 0, 0);
    const double D1 = p1.focal_distance();
    const double D2 = p2.focal_distance();
    CHECK(D2 == doctest::Approx(D1 / lambda).epsilon(1e-10));
    for (int i = 1; i < 20; ++i) {
        const double x = i / 20.0;
        const double a = p1.mean_curvature(x * D1) * D1;
        const double b = p2.mean_curvature(x * D2) * D2;
        CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("profile_from_ab rejects data without focal endpoints") {
    IsoparametricData data;
    data.b = [](double) { return 1.0; };
    data.b_prime = [](double) { return 0.0; };
    data.a = [](double) { return 0.0; };
    data.f_min = -1.0;
    data.f_max = 1.0;
    CHECK(kind_of([&] { profile_from_ab(data, 4, 0, 0); }) == ErrorKind::Integrability);
}

TEST_CASE("critical exponent gate") {
    const ExponentReport r1 = critical_exponent(fixtures::pole4(), 1.0);
    CHECK(r1.bounded);
    CHECK(r1.critical == doctest::Approx(3.0));
    CHECK(critical_exponent(fixtures::pole4(), 1e-12).critical == doctest::Approx(4.0));
    const ExponentReport half = critical_exponent(fixtures::pole4(), 0.5);
    CHECK(half.critical == doctest::Approx(3.5));
    CHECK(half.admissible(3.0));
    CHECK_FALSE(half.admissible(3.5));
    CHECK_FALSE(half.admissible(2.0));

    const ExponentReport open = critical_exponent(sphere_tube_profile(3, 1), 0.5);
    CHECK_FALSE(open.bounded);
    CHECK(open.admissible(50.0));
    CHECK_FALSE(open.admissible(2.0));

    CHECK(kind_of([] { critical_exponent(fixtures::pole4(), 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { critical_exponent(fixtures::pole4(), 2.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("ab table round trip") {
    const auto dir = fixtures::scratch_dir("abtable");
    const auto path = dir / "pole.txt";
    {
        std::ofstream out(path);
        out << "f a b\n";
        for (int i = 0; i <= 2000; ++i) {
            const double f = -1.0 + 2.0 * i / 2000.0;
            out.precision(17);
            out << f << " " << 4 * f << " " << 1 - f * f << "\n";
        }
    }
    const IsoparametricProfile p = profile_from_ab(read_ab_table(path.string()), 4, 0, 0);
    CHECK(p.focal_distance() == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(p.mean_curvature(M_PI / 3) == doctest::Approx(-3.0 / std::tan(M_PI / 3)).epsilon(1e-8));
    std::ofstream(dir / "open.txt") << "f a b\n-1 0 0.5\n0 0 1\n0.5 0 0.75\n1 0 0\n";
    CHECK(kind_of([&] { read_ab_table((dir / "open.txt").string()); }) == ErrorKind::Integrability);
    std::ofstream(dir / "short.txt") << "f a b\n-1 0 0\n1 0 0\n";
    CHECK(kind_of([&] { read_ab_table((dir / "short.txt").string()); }) == ErrorKind::Parse);
}
