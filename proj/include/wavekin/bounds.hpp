#pragma once

namespace wavekin {

// Convergence-apparatus inputs: weight exponent s, the two geometric scales
// eps1 > eps2, the time horizon, the collision constant, and the initial
// hierarchy norm the bounds multiply.
struct SeriesParams {
    double s = 3.0;
    double eps1 = 0.5;
    double eps2 = 0.2;
    double t_horizon = 0.1;
    double c_s = 1.0;
    double norm_f0 = 1.0;
};

struct FactorialBounds {
    double lower = 0.0;  // sqrt(2 pi) j^(j+1/2) e^-j e^(1/(12j+1))
    double upper = 0.0;  // same with exponent 1/(12j)
};
FactorialBounds robbins_bounds(int j);

// sup_{m>=1} m*(eps_prime/eps)^m, scanned over integers around the stationary
// point -1/log(ratio).
double loss_factor(double eps_prime, double eps);

struct BalanceReport {
    bool ok = false;
    double ratio_product = 0.0;  // eps2 * exp(T C_s / eps1^2) / eps1, must be < 1
    double time_product = 0.0;   // C_s * T / eps1^2, must be < 1
};
BalanceReport check_balance(const SeriesParams& p);

// [q/(1-q) + x^2/(1-x)] * norm_F0 with q, x the two balance products.
// Throws BalanceViolated unless check_balance passes.
double series_tail_bound(const SeriesParams& p);

// C_s^(j+1) T^(j+1) prod_{r<=j+1}(m+2r-2) / ((j+1)! eps^(m+2j+2)) * norm_f,
// evaluated in log space.  s is carried for interface symmetry; the
// s-dependence lives inside the estimated constant.
double truncation_error_bound(double s, double eps, double c_s, double t, int j, int m,
                              double norm_f);

// prod_{r=1}^k (m+2r-2) with its regime bound (3m)^k for k <= m, (3k)^k for
// k > m, both in log space.
struct GrowthProduct {
    double log_value = 0.0;
    double log_bound = 0.0;
    double value() const;
    double bound() const;
};
GrowthProduct growth_product(int m, int k);

}  // namespace wavekin
