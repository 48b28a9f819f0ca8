#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wavekin/dispersion.hpp"
#include "wavekin/errors.hpp"
#include "wavekin/manifold.hpp"

#include <cmath>

using namespace wavekin;

TEST_CASE("quadratic law evaluates and certifies with c1 = 2") {
    auto rel = DispersionRelation::schrodinger();
    CHECK(rel.omega_radial(0.0) == 0.0);
    CHECK(rel.omega_radial(2.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(rel.omega_prime(3.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(rel.omega({1.0, 2.0, 2.0}) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK_FALSE(rel.verified());

    AssumptionReport rep = verify_assumptions(rel, 20.0);
    CHECK(rep.all_hold());
    CHECK(rep.violation.empty());
    CHECK(rel.verified());
    // Omega'(x)/x = 2 exactly, and 2 x^2 = (sqrt(2) x)^2 makes sqrt(2) a
    // doubling factor.
    CHECK(rel.c1() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rel.c2() >= std::sqrt(2.0) - 1e-9);
    CHECK(rel.c2() <= 2.0);
    CHECK(rel.certified_radius() == doctest::Approx(20.0));
}

TEST_CASE("square-root law certifies for positive coefficients") {
    auto rel = DispersionRelation::bogoliubov(1.0, 1.0);
    // Omega(r) = sqrt(r^2 + r^4) = r sqrt(1 + r^2)
    CHECK(rel.omega_radial(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    double h = 1e-6;
    double fd = (rel.omega_radial(1.0 + h) - rel.omega_radial(1.0 - h)) / (2 * h);
    CHECK(rel.omega_prime(1.0) == doctest::Approx(fd).epsilon(1e-8));

    AssumptionReport rep = verify_assumptions(rel, 20.0);
    CHECK(rep.all_hold());
    CHECK(rel.verified());
    CHECK(rel.c1() > 0.0);
}

TEST_CASE("a spectral gap breaks the doubling inequality near zero") {
    // 2 Omega(x) <= Omega(c2 x) forces Omega(0) = 0, so any gapped law must
    // fail verification; the ungapped variant of the same family passes.
    auto gapped = DispersionRelation::bohm_pines(0.5, 1.0, 0.25);
    CHECK(gapped.omega_radial(0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    AssumptionReport rep = verify_assumptions(gapped, 20.0);
    CHECK_FALSE(rep.doubling_holds);
    CHECK_FALSE(rep.all_hold());
    CHECK_FALSE(gapped.verified());

    auto ungapped = DispersionRelation::bohm_pines(0.0, 1.0, 0.25);
    CHECK(verify_assumptions(ungapped, 20.0).all_hold());
}

TEST_CASE("even-polynomial law certifies only without constant term") {
    auto gapped = DispersionRelation::low_temp_poly(0.1, 1.0, 0.05);
    CHECK(gapped.omega_radial(2.0) == doctest::Approx(0.1 + 4.0 + 0.05 * 16.0).epsilon(1e-14));
    CHECK_FALSE(verify_assumptions(gapped, 20.0).all_hold());

    auto ungapped = DispersionRelation::low_temp_poly(0.0, 1.0, 0.05);
    AssumptionReport rep = verify_assumptions(ungapped, 20.0);
    CHECK(rep.all_hold());
}

TEST_CASE("a constant law fails the growth inequality") {
    auto rel = DispersionRelation::low_temp_poly(1.0, 0.0, 0.0);
    AssumptionReport rep = verify_assumptions(rel, 20.0);
    CHECK_FALSE(rep.all_hold());
    CHECK_FALSE(rep.growth_holds);
    CHECK_FALSE(rep.violation.empty());
    CHECK_FALSE(rel.verified());
}

TEST_CASE("negative coefficients are rejected at construction") {
    CHECK_THROWS_AS(DispersionRelation::bogoliubov(-1.0, 1.0), ParameterOutOfRange);
    CHECK_THROWS_AS(DispersionRelation::bohm_pines(1.0, -0.5, 1.0), ParameterOutOfRange);
    CHECK_THROWS_AS(DispersionRelation::low_temp_poly(0.0, 1.0, -2.0), ParameterOutOfRange);
}

TEST_CASE("manifold construction refuses an unverified relation") {
    auto rel = DispersionRelation::schrodinger();
    PhasePair pr{{1, 0, 0}, {-1, 0, 0}};
    QuadConfig cfg;
    CHECK_THROWS_AS(build_manifold_quadrature(rel, pr, cfg), UnverifiedDispersion);
    verify_assumptions(rel, 20.0);
    CHECK_NOTHROW(build_manifold_quadrature(rel, pr, cfg));
}

TEST_CASE("kind names round-trip") {
    for (DispersionKind k : {DispersionKind::schrodinger, DispersionKind::bogoliubov,
                             DispersionKind::bohm_pines, DispersionKind::low_temp_poly}) {
        CHECK(dispersion_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(dispersion_kind_from_string("fourier"), ParameterOutOfRange);
}

TEST_CASE("report records where the growth infimum is attained") {
    auto rel = DispersionRelation::bogoliubov(1.0, 1.0);
    AssumptionReport rep = verify_assumptions(rel, 20.0, 1024);
    CHECK(rep.n_samples == 1024);
    CHECK(rep.r_max == doctest::Approx(20.0));
    CHECK(rep.worst_x_growth > 0.0);
    CHECK(rep.worst_x_growth <= 20.0);
    // Omega'(x)/x for r sqrt(1+r^2) decreases toward x = 0; the infimum over
    // the sample set sits at the smallest radius and is >= 1 (the r^2 slope).
    CHECK(rep.best_c1 >= 1.0 - 1e-9);
}

TEST_CASE("doubling factor is honored at sampled radii") {
    auto rel = DispersionRelation::schrodinger();
    AssumptionReport rep = verify_assumptions(rel, 20.0);
    for (double x : {0.3, 1.0, 4.0, 9.5}) {
        CHECK(2.0 * rel.omega_radial(x) <= rel.omega_radial(rep.best_c2 * x) * (1 + 1e-12));
    }
}
