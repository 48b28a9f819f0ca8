#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wavekin/errors.hpp"
#include "wavekin/manifold.hpp"

#include <algorithm>
#include <cmath>

using namespace wavekin;

namespace {

DispersionRelation verified_schrodinger() {
    auto rel = DispersionRelation::schrodinger();
    verify_assumptions(rel, 40.0);
    return rel;
}

DispersionRelation verified_bogoliubov() {
    auto rel = DispersionRelation::bogoliubov(1.0, 1.0);
    verify_assumptions(rel, 40.0);
    return rel;
}

QuadConfig quad(int ns, int na) {
    QuadConfig c;
    c.n_slices = ns;
    c.n_angular = na;
    return c;
}

}  // namespace

TEST_CASE("phase value vanishes on analytically known surface points") {
    auto rel = verified_schrodinger();
    PhasePair pr{{1, 0, 0}, {-1, 0, 0}};
    // For the quadratic law and rho = 0 the surface is |z| = |xi|.
    CHECK(phase_value(rel, pr, {0, 1, 0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(phase_value(rel, pr, {0, 0, -1}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(phase_value(rel, pr, {0, 0, 2}) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("phase gradient norm matches the quadratic closed form") {
    auto rel = verified_schrodinger();
    PhasePair pr{{0.7, 0.2, -0.1}, {-0.3, 0.5, 0.4}};
    Vec3 rho = pr.xi + pr.xi1;
    for (Vec3 z : {Vec3{0.5, 0.1, 0.2}, Vec3{-0.2, 0.4, 0.05}}) {
        // grad G = 2z - 2(rho - z) = 2(2z - rho) for Omega = r^2.
        Vec3 g{2 * (2 * z.x - rho.x), 2 * (2 * z.y - rho.y), 2 * (2 * z.z - rho.z)};
        CHECK(phase_gradient_norm(rel, pr, z) == doctest::Approx(norm(g)).epsilon(1e-12));
    }
}

TEST_CASE("quadratic-law surface measure equals pi/2 times the pair separation") {
    auto rel = verified_schrodinger();
    QuadConfig cfg = quad(16, 16);
    struct Case {
        PhasePair pr;
    } cases[] = {
        {{{1, 0, 0}, {-1, 0, 0}}},
        {{{0.7, 0.2, -0.1}, {-0.3, 0.5, 0.4}}},
        {{{1.5, 0, 0}, {0.5, 0.25, 0}}},
    };
    for (const auto& c : cases) {
        auto q = build_manifold_quadrature(rel, c.pr, cfg);
        double expect = M_PI / 2.0 * norm(c.pr.xi - c.pr.xi1);
        CHECK(q.measure() == doctest::Approx(expect).epsilon(2e-3));
        CHECK_FALSE(q.degenerate);
    }
}

TEST_CASE("quadrature nodes sit on the surface to root tolerance") {
    auto rel = verified_bogoliubov();
    PhasePair pr{{0.7, 0.2, -0.1}, {-0.3, 0.5, 0.4}};
    auto q = build_manifold_quadrature(rel, pr, quad(16, 16));
    REQUIRE(q.nodes.size() == 16 * 16);
    double worst = 0.0;
    for (const Vec3& z : q.nodes) worst = std::max(worst, std::fabs(phase_value(rel, pr, z)));
    CHECK(worst < 1e-9);
    double rb = surface_radius_bound(rel, pr);
    for (const Vec3& z : q.nodes) {
        CHECK(norm(z) <= rb + 1e-9);
        CHECK(norm(q.rho - z) <= rb + 1e-9);
    }
}

TEST_CASE("surface measure converges under node refinement") {
    auto rel = verified_bogoliubov();
    PhasePair pr{{0.7, 0.2, -0.1}, {-0.3, 0.5, 0.4}};
    double m8 = build_manifold_quadrature(rel, pr, quad(8, 8)).measure();
    double m16 = build_manifold_quadrature(rel, pr, quad(16, 16)).measure();
    double m32 = build_manifold_quadrature(rel, pr, quad(32, 32)).measure();
    double m64 = build_manifold_quadrature(rel, pr, quad(64, 64)).measure();
    CHECK(std::fabs(m32 - m16) < std::fabs(m16 - m8));
    CHECK(std::fabs(m64 - m32) < std::fabs(m32 - m16));
    CHECK(std::fabs(m64 - m32) / m64 < 1e-3);
}

TEST_CASE("surface measure agrees with the mollified Monte Carlo oracle") {
    auto rel = verified_bogoliubov();
    auto one = [](const Vec3&) { return 1.0; };

    PhasePair pr{{0.7, 0.2, -0.1}, {-0.3, 0.5, 0.4}};
    double mq = build_manifold_quadrature(rel, pr, quad(64, 64)).measure();
    McEstimate mc = mollified_delta_integral(rel, pr, one, 0.05, 2000000, 42);
    CHECK(std::fabs(mc.value - mq) < std::max(3.0 * mc.std_error, 0.01 * mq));

    // Opposite pair: rho = 0 engages the sphere branch.
    PhasePair pr0{{0.9, 0.1, 0.2}, {-0.9, -0.1, -0.2}};
    double mq0 = build_manifold_quadrature(rel, pr0, quad(32, 32)).measure();
    McEstimate mc0 = mollified_delta_integral(rel, pr0, one, 0.05, 2000000, 7);
    CHECK(std::fabs(mc0.value - mq0) < std::max(3.0 * mc0.std_error, 0.01 * mq0));
}

TEST_CASE("weighted integrals against a smooth function agree with the oracle") {
    auto rel = verified_schrodinger();
    PhasePair pr{{1.2, 0.3, 0}, {-0.4, 0.8, 0.5}};
    auto f = [](const Vec3& z) { return std::exp(-0.5 * dot(z, z)); };
    auto q = build_manifold_quadrature(rel, pr, quad(48, 48));
    double viaq = manifold_integrate(q, f);
    McEstimate mc = mollified_delta_integral(rel, pr, f, 0.03, 2000000, 11);
    CHECK(std::fabs(mc.value - viaq) < std::max(3.0 * mc.std_error, 0.015 * std::fabs(viaq)));
}

TEST_CASE("exactly coincident pairs are flagged degenerate with zero measure") {
    auto rel = verified_schrodinger();
    PhasePair pr{{0.5, -0.25, 1.0}, {0.5, -0.25, 1.0}};
    auto q = build_manifold_quadrature(rel, pr, quad(16, 16));
    CHECK(q.degenerate);
    CHECK(q.nodes.empty());
    CHECK(q.measure() == 0.0);
}

TEST_CASE("node set is reflection symmetric for even angular counts") {
    auto rel = verified_bogoliubov();
    PhasePair pr{{0.7, 0.2, -0.1}, {-0.3, 0.5, 0.4}};
    auto q = build_manifold_quadrature(rel, pr, quad(12, 12));
    // z -> rho - z maps the node set to itself; integrating g(z) vs g(rho - z)
    // must give identical sums up to roundoff.
    auto g = [](const Vec3& z) { return std::cos(z.x) + 0.3 * z.y * z.z; };
    double a = manifold_integrate(q, g);
    double b = manifold_integrate(q, [&](const Vec3& z) { return g(q.rho - z); });
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("in-place construction matches the allocating path") {
    auto rel = verified_bogoliubov();
    PhasePair pr{{1.5, 0, 0}, {0.5, 0.25, 0}};
    QuadConfig cfg = quad(12, 12);
    auto q = build_manifold_quadrature(rel, pr, cfg);
    QuadWorkspace ws;
    build_quadrature_inplace(rel, pr, cfg, ws);
    REQUIRE(ws.nodes.size() == q.nodes.size());
    for (size_t i = 0; i < q.nodes.size(); ++i) {
        CHECK(norm(ws.nodes[i] - q.nodes[i]) == 0.0);
        CHECK(ws.weights[i] == q.weights[i]);
        CHECK(ws.grad_norms[i] == q.grad_norms[i]);
    }
}

TEST_CASE("monte carlo oracle is deterministic for a fixed seed") {
    auto rel = verified_schrodinger();
    PhasePair pr{{1, 0, 0}, {-0.2, 0.5, 0}};
    auto one = [](const Vec3&) { return 1.0; };
    McEstimate a = mollified_delta_integral(rel, pr, one, 0.05, 300000, 1234);
    McEstimate b = mollified_delta_integral(rel, pr, one, 0.05, 300000, 1234);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    McEstimate c = mollified_delta_integral(rel, pr, one, 0.05, 300000, 1235);
    CHECK(a.value != c.value);
}

TEST_CASE("radius bound is monotone in the pair energy") {
    auto rel = verified_bogoliubov();
    double r1 = surface_radius_bound(rel, {{1, 0, 0}, {0.5, 0, 0}});
    double r2 = surface_radius_bound(rel, {{2, 0, 0}, {0.5, 0, 0}});
    CHECK(r2 > r1);
    CHECK(r1 > 1.0);  // must cover |z| = |xi| on the antipodal surface
}

TEST_CASE("quadrature validates its configuration") {
    auto rel = verified_schrodinger();
    PhasePair pr{{1, 0, 0}, {-1, 0, 0}};
    QuadConfig bad = quad(1, 12);
    CHECK_THROWS_AS(build_manifold_quadrature(rel, pr, bad), ParameterOutOfRange);
    bad = quad(12, 1);
    CHECK_THROWS_AS(build_manifold_quadrature(rel, pr, bad), ParameterOutOfRange);
    CHECK_THROWS_AS(
        mollified_delta_integral(rel, pr, [](const Vec3&) { return 1.0; }, 0.0, 10000, 1),
        ParameterOutOfRange);
}
