#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wavekin/bounds.hpp"
#include "wavekin/errors.hpp"

#include <cmath>

using namespace wavekin;

namespace {

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

TEST_CASE("factorial brackets contain the exact factorial for j = 1..20") {
    double fact = 1.0;
    for (int j = 1; j <= 20; ++j) {
        fact *= j;
        FactorialBounds b = robbins_bounds(j);
        CAPTURE(j);
        CHECK(b.lower <= fact);
        CHECK(fact <= b.upper);
        CHECK(b.lower > 0.0);
    }
}

TEST_CASE("factorial bracket at j = 1 matches the closed form") {
    FactorialBounds b = robbins_bounds(1);
    const double stirling = std::sqrt(2.0 * M_PI) * std::exp(-1.0);
    CHECK(b.lower == doctest::Approx(stirling * std::exp(1.0 / 13.0)).epsilon(1e-14));
    CHECK(b.upper == doctest::Approx(stirling * std::exp(1.0 / 12.0)).epsilon(1e-14));
    CHECK(b.lower == doctest::Approx(0.9958704).epsilon(1e-6));
    CHECK(b.upper == doctest::Approx(1.0022744).epsilon(1e-6));
}

TEST_CASE("factorial bracket tightens relative to j! as j grows") {
    FactorialBounds b5 = robbins_bounds(5);
    FactorialBounds b20 = robbins_bounds(20);
    CHECK(b20.upper / b20.lower < b5.upper / b5.lower);
    CHECK(b20.upper / b20.lower < 1.0 + 1e-3);
}

TEST_CASE("robbins_bounds rejects j < 1") {
    CHECK_THROWS_AS(robbins_bounds(0), ParameterOutOfRange);
    CHECK_THROWS_AS(robbins_bounds(-3), ParameterOutOfRange);
}

TEST_CASE("loss_factor reproduces hand-computable suprema") {
    // ratio 1/2: m * 2^-m peaks at m = 1 among integers => 1/2.
    CHECK(loss_factor(0.25, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    // ratio e^-1: m e^-m peaks exactly at m = 1 => e^-1.
    const double r = std::exp(-1.0);
    CHECK(loss_factor(r * 0.9, 0.9) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("loss_factor grows without bound as the ratio approaches 1") {
    double prev = 0.0;
    for (double ratio : {0.5, 0.9, 0.99, 0.999}) {
        double v = loss_factor(0.25 * ratio, 0.25);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev > 100.0);
}

TEST_CASE("loss_factor validates its arguments") {
    CHECK_THROWS_AS(loss_factor(0.5, 0.5), ParameterOutOfRange);   // ratio = 1
    CHECK_THROWS_AS(loss_factor(0.6, 0.5), ParameterOutOfRange);   // ratio > 1
    CHECK_THROWS_AS(loss_factor(0.0, 0.5), ParameterOutOfRange);
    CHECK_THROWS_AS(loss_factor(0.25, 0.0), ParameterOutOfRange);
}

TEST_CASE("check_balance computes both products") {
    SeriesParams p;
    p.eps1 = 0.5;
    p.eps2 = 0.3;
    p.c_s = 1.0;
    p.t_horizon = 0.125;
    p.norm_f0 = 1.0;
    BalanceReport r = check_balance(p);
    // ratio = (eps2/eps1) exp(T C_s / eps1^2) = 0.6 e^0.5
    CHECK(r.ratio_product == doctest::Approx(0.6 * std::exp(0.5)).epsilon(1e-14));
    CHECK(r.time_product == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.ok);
}

TEST_CASE("check_balance flags a ratio product at or above one") {
    SeriesParams p;
    p.eps1 = 0.5;
    p.eps2 = 0.45;   // 0.9 e^0.5 > 1
    p.c_s = 1.0;
    p.t_horizon = 0.125;
    BalanceReport r = check_balance(p);
    CHECK_FALSE(r.ok);
    CHECK(r.ratio_product > 1.0);
}

TEST_CASE("series_tail_bound equals the geometric-series closed form") {
    SeriesParams p;
    p.eps1 = 0.5;
    p.eps2 = 0.3;
    p.c_s = 1.0;
    p.t_horizon = 0.125;
    p.norm_f0 = 2.0;
    BalanceReport r = check_balance(p);
    const double q = r.ratio_product;
    const double x = r.time_product;
    const double expect = (q / (1.0 - q) + x * x / (1.0 - x)) * p.norm_f0;
    CHECK(series_tail_bound(p) == doctest::Approx(expect).epsilon(1e-14));
    p.norm_f0 = 1.0;
    CHECK(series_tail_bound(p) == doctest::Approx(92.374332).epsilon(1e-6));
}

TEST_CASE("series_tail_bound refuses violated balance") {
    SeriesParams p;
    p.eps1 = 0.5;
    p.eps2 = 0.45;
    p.c_s = 1.0;
    p.t_horizon = 0.125;
    CHECK_THROWS_AS(series_tail_bound(p), BalanceViolated);
}

TEST_CASE("truncation_error_bound matches the central-binomial closed form at m = 1") {
    // With C_s = 1, T = 1/8, eps = 1/2 the J-term bound reduces to
    // (2J-1)!!/J! * 8^-J * 2^(2J+3) * 2^-3 = C(2J,J) 2^-2J * eps^-1.
    for (int J : {5, 10, 20, 40}) {
        double expect = binomial(2 * J, J) * std::pow(2.0, -2 * J) * 2.0;
        CHECK(truncation_error_bound(3.0, 0.5, 1.0, 0.125, J - 1, 1, 1.0) ==
              doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(truncation_error_bound(3.0, 0.5, 1.0, 0.125, 4, 1, 1.0) ==
          doctest::Approx(0.4921875).epsilon(1e-12));
    CHECK(truncation_error_bound(3.0, 0.5, 1.0, 0.125, 9, 1, 1.0) ==
          doctest::Approx(0.35239410).epsilon(1e-7));
}

TEST_CASE("truncation_error_bound decreases along the ladder when C_s T / eps^2 = 1/2") {
    double prev = 1e300;
    for (int J : {5, 10, 20, 40}) {
        double v = truncation_error_bound(3.0, 0.5, 1.0, 0.125, J - 1, 1, 1.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.18);
}

TEST_CASE("truncation_error_bound can increase when C_s T / eps^2 is close to one") {
    // At C_s T / eps^2 = 0.9 the combinatorial growth beats the time power:
    // the ladder is not monotone there, which bounds the usable horizon.
    double v5 = truncation_error_bound(3.0, 0.5, 1.0, 0.225, 4, 1, 1.0);
    double v10 = truncation_error_bound(3.0, 0.5, 1.0, 0.225, 9, 1, 1.0);
    CHECK(v10 > v5);
    CHECK(v5 == doctest::Approx(9.3002).epsilon(1e-4));
    CHECK(v10 == doctest::Approx(125.8212).epsilon(1e-4));
}

TEST_CASE("truncation_error_bound scales linearly in the norm and validates inputs") {
    double v1 = truncation_error_bound(3.0, 0.5, 1.0, 0.125, 4, 1, 1.0);
    double v3 = truncation_error_bound(3.0, 0.5, 1.0, 0.125, 4, 1, 3.0);
    CHECK(v3 == doctest::Approx(3.0 * v1).epsilon(1e-14));
    CHECK_THROWS_AS(truncation_error_bound(3.0, 0.0, 1.0, 0.125, 4, 1, 1.0), ParameterOutOfRange);
    CHECK_THROWS_AS(truncation_error_bound(3.0, 0.5, -1.0, 0.125, 4, 1, 1.0), ParameterOutOfRange);
    CHECK_THROWS_AS(truncation_error_bound(3.0, 0.5, 1.0, 0.125, -1, 1, 1.0), ParameterOutOfRange);
    CHECK_THROWS_AS(truncation_error_bound(3.0, 0.5, 1.0, 0.125, 4, 0, 1.0), ParameterOutOfRange);
}

TEST_CASE("growth_product counts interaction tuples against its stated bound") {
    GrowthProduct g13 = growth_product(1, 3);
    CHECK(g13.value() == doctest::Approx(15.0).epsilon(1e-12));   // 1*3*5
    CHECK(g13.bound() == doctest::Approx(729.0).epsilon(1e-12));  // (3*3)^3
    GrowthProduct g42 = growth_product(4, 2);
    CHECK(g42.value() == doctest::Approx(24.0).epsilon(1e-12));   // 4*6
    CHECK(g42.bound() == doctest::Approx(144.0).epsilon(1e-12));  // (3*4)^2
    GrowthProduct g0 = growth_product(2, 0);
    CHECK(g0.value() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g0.bound() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("growth_product value never exceeds its bound on a parameter sweep") {
    for (int m = 1; m <= 6; ++m)
        for (int k = 0; k <= 6; ++k) {
            GrowthProduct g = growth_product(m, k);
            CAPTURE(m);
            CAPTURE(k);
            CHECK(g.log_value <= g.log_bound + 1e-12);
        }
}

TEST_CASE("growth_product stays finite in log space for large arguments") {
    GrowthProduct g = growth_product(40, 40);
    CHECK(std::isfinite(g.log_value));
    CHECK(std::isfinite(g.log_bound));
    CHECK(g.log_value <= g.log_bound);
}

TEST_CASE("the horizon recipe always balances") {
    // T = eps1^2 / (2 C_s) and eps2 = 0.99 eps1 e^-1/2 give
    // ratio_product = 0.99 and time_product = 1/2 for every (eps1, C_s).
    for (int t = 0; t < 5; ++t) {
        double e1 = 0.2 + 0.15 * t;
        double cs = 0.5 + 2.0 * t;
        SeriesParams p;
        p.eps1 = e1;
        p.eps2 = 0.99 * e1 * std::exp(-0.5);
        p.c_s = cs;
        p.t_horizon = 0.5 * e1 * e1 / cs;
        p.norm_f0 = 1.0;
        BalanceReport r = check_balance(p);
        CAPTURE(e1);
        CAPTURE(cs);
        CHECK(r.ok);
        CHECK(r.ratio_product == doctest::Approx(0.99).epsilon(1e-12));
        CHECK(r.time_product == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(series_tail_bound(p) > 0.0);
    }
}
