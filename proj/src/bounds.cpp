#include "wavekin/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterOutOfRange(what);
}

// log of prod_{r=1}^k (m+2r-2); exact accumulation, no Stirling shortcuts.
double log_growth(int m, int k) {
    double acc = 0.0;
    for (int r = 1; r <= k; ++r) acc += std::log(static_cast<double>(m + 2 * r - 2));
    return acc;
}

}  // namespace

FactorialBounds robbins_bounds(int j) {
    require(j >= 1, "robbins_bounds requires j >= 1");
    const double x = static_cast<double>(j);
    const double core = std::sqrt(2.0 * M_PI) * std::pow(x, x + 0.5) * std::exp(-x);
    return {core * std::exp(1.0 / (12.0 * x + 1.0)), core * std::exp(1.0 / (12.0 * x))};
}

double loss_factor(double eps_prime, double eps) {
    require(eps_prime > 0.0 && eps < 1.0 && eps_prime < eps,
            "loss_factor requires 0 < eps_prime < eps < 1");
    const double ratio = eps_prime / eps;
    // m * ratio^m is unimodal over m > 0 with peak at -1/log(ratio); the
    // integer sup sits within one step of it.
    const double peak = -1.0 / std::log(ratio);
    const long long lo = std::max(1LL, static_cast<long long>(std::floor(peak)) - 2);
    double best = 0.0;
    for (long long mm = lo; mm <= lo + 5; ++mm) {
        const double m = static_cast<double>(mm);
        best = std::max(best, m * std::pow(ratio, m));
    }
    return std::max(best, ratio);  // m = 1 candidate, always admissible
}

BalanceReport check_balance(const SeriesParams& p) {
    require(p.eps1 > 0.0 && p.eps1 < 1.0, "check_balance requires eps1 in (0,1)");
    require(p.eps2 > 0.0 && p.eps2 < p.eps1, "check_balance requires 0 < eps2 < eps1");
    require(p.t_horizon > 0.0, "check_balance requires positive time horizon");
    require(p.c_s > 0.0, "check_balance requires positive collision constant");
    BalanceReport r;
    r.time_product = p.c_s * p.t_horizon / (p.eps1 * p.eps1);
    r.ratio_product = p.eps2 * std::exp(r.time_product) / p.eps1;
    r.ok = r.ratio_product < 1.0 && r.time_product < 1.0;
    return r;
}

double series_tail_bound(const SeriesParams& p) {
    require(p.norm_f0 >= 0.0, "series_tail_bound requires a nonnegative initial norm");
    const BalanceReport r = check_balance(p);
    if (!r.ok) throw BalanceViolated("series tail bound undefined: balance products are not both < 1");
    const double q = r.ratio_product;
    const double x = r.time_product;
    return (q / (1.0 - q) + x * x / (1.0 - x)) * p.norm_f0;
}

double truncation_error_bound(double s, double eps, double c_s, double t, int j, int m,
                              double norm_f) {
    (void)s;
    require(eps > 0.0, "truncation_error_bound requires eps > 0");
    require(c_s > 0.0 && t > 0.0, "truncation_error_bound requires positive C_s and T");
    require(j >= 0 && m >= 1, "truncation_error_bound requires j >= 0, m >= 1");
    require(norm_f >= 0.0, "truncation_error_bound requires a nonnegative norm");
    if (norm_f == 0.0) return 0.0;
    const int jj = j + 1;
    const double log_val = jj * (std::log(c_s) + std::log(t)) + log_growth(m, jj) -
                           std::lgamma(static_cast<double>(jj) + 1.0) -
                           (m + 2 * jj) * std::log(eps) + std::log(norm_f);
    return std::exp(log_val);
}

double GrowthProduct::value() const { return std::exp(log_value); }
double GrowthProduct::bound() const { return std::exp(log_bound); }

GrowthProduct growth_product(int m, int k) {
    require(m >= 1 && k >= 0, "growth_product requires m >= 1, k >= 0");
    GrowthProduct g;
    g.log_value = log_growth(m, k);
    const double base = 3.0 * static_cast<double>(k <= m ? m : k);
    g.log_bound = k * std::log(base);
    return g;
}

}  // namespace wavekin
