#include "wavekin/dispersion.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "wavekin/errors.hpp"

namespace wavekin {

std::string to_string(DispersionKind k) {
    switch (k) {
        case DispersionKind::schrodinger: return "schrodinger";
        case DispersionKind::bogoliubov: return "bogoliubov";
        case DispersionKind::bohm_pines: return "bohm_pines";
        case DispersionKind::low_temp_poly: return "low_temp_poly";
    }
    return "unknown";
}

DispersionKind dispersion_kind_from_string(const std::string& s) {
    if (s == "schrodinger") return DispersionKind::schrodinger;
    if (s == "bogoliubov") return DispersionKind::bogoliubov;
    if (s == "bohm_pines") return DispersionKind::bohm_pines;
    if (s == "low_temp_poly") return DispersionKind::low_temp_poly;
    throw ParameterOutOfRange("unknown dispersion kind: " + s);
}

DispersionRelation::DispersionRelation(DispersionKind k, std::array<double, 3> c)
    : kind_(k), c_(c) {
    for (double v : c_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ParameterOutOfRange("dispersion coefficients must be finite and nonnegative");
        }
    }
}

DispersionRelation DispersionRelation::schrodinger() {
    return DispersionRelation(DispersionKind::schrodinger, {0.0, 0.0, 0.0});
}

DispersionRelation DispersionRelation::bogoliubov(double theta1, double theta2) {
    return DispersionRelation(DispersionKind::bogoliubov, {0.0, theta1, theta2});
}

DispersionRelation DispersionRelation::bohm_pines(double theta0, double theta1, double theta2) {
    return DispersionRelation(DispersionKind::bohm_pines, {theta0, theta1, theta2});
}

DispersionRelation DispersionRelation::low_temp_poly(double lambda0, double lambda1,
                                                     double lambda2) {
    return DispersionRelation(DispersionKind::low_temp_poly, {lambda0, lambda1, lambda2});
}

double DispersionRelation::omega_radial(double r) const {
    const double r2 = r * r;
    switch (kind_) {
        case DispersionKind::schrodinger:
            return r2;
        case DispersionKind::bogoliubov:
            return std::sqrt(r2 * (c_[1] + c_[2] * r2));
        case DispersionKind::bohm_pines:
            return std::sqrt(c_[0] + r2 * (c_[1] + c_[2] * r2));
        case DispersionKind::low_temp_poly:
            return c_[0] + r2 * (c_[1] + c_[2] * r2);
    }
    return 0.0;
}

double DispersionRelation::omega_prime(double r) const {
    const double r2 = r * r;
    switch (kind_) {
        case DispersionKind::schrodinger:
            return 2.0 * r;
        case DispersionKind::bogoliubov: {
            // Omega = r sqrt(th1 + th2 r^2); Omega' = (th1 + 2 th2 r^2) / sqrt(th1 + th2 r^2).
            const double s = c_[1] + c_[2] * r2;
            if (s <= 0.0) return 0.0;
            return (c_[1] + 2.0 * c_[2] * r2) / std::sqrt(s);
        }
        case DispersionKind::bohm_pines: {
            const double w = omega_radial(r);
            if (w <= 0.0) {
                // th0 = 0 degenerates to the bogoliubov form at r = 0.
                return c_[1] > 0.0 ? std::sqrt(c_[1]) : 0.0;
            }
            return r * (c_[1] + 2.0 * c_[2] * r2) / w;
        }
        case DispersionKind::low_temp_poly:
            return r * (2.0 * c_[1] + 4.0 * c_[2] * r2);
    }
    return 0.0;
}

AssumptionReport verify_assumptions(DispersionRelation& rel, double r_max, int n_samples,
                                    double c2_max) {
    if (!(r_max > 0.0) || n_samples < 8 || !(c2_max > 1.0)) {
        throw ParameterOutOfRange("verify_assumptions: need r_max > 0, n_samples >= 8, c2_max > 1");
    }

    // Radii: half geometric (resolves behaviour near 0), half uniform.
    std::vector<double> xs;
    xs.reserve(static_cast<size_t>(n_samples));
    const int n_geo = n_samples / 2;
    const int n_uni = n_samples - n_geo;
    const double lo = r_max * 1e-6;
    for (int i = 0; i < n_geo; ++i) {
        const double t = static_cast<double>(i) / (n_geo - 1);
        xs.push_back(lo * std::pow(r_max / lo, t));
    }
    for (int i = 0; i < n_uni; ++i) {
        xs.push_back(r_max * (i + 1.0) / n_uni);
    }

    AssumptionReport rep;
    rep.r_max = r_max;
    rep.n_samples = n_samples;

    rep.smooth_nonneg = true;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        const double w = rel.omega_radial(x);
        const double wp = rel.omega_prime(x);
        if (!(w >= 0.0) || !std::isfinite(w) || !std::isfinite(wp)) {
            rep.smooth_nonneg = false;
            if (rep.violation.empty()) {
                std::ostringstream os;
                os << "Omega(x) >= 0 / finiteness fails at x = " << x;
                rep.violation = os.str();
            }
        }
        const double ratio = wp / x;
        if (ratio < min_ratio) {
            min_ratio = ratio;
            rep.worst_x_growth = x;
        }
    }
    rep.best_c1 = min_ratio;
    rep.growth_holds = std::isfinite(min_ratio) && min_ratio > 1e-12;
    if (!rep.growth_holds && rep.violation.empty()) {
        std::ostringstream os;
        os << "growth Omega'(x) >= c1 x fails: inf Omega'(x)/x = " << min_ratio
           << " at x = " << rep.worst_x_growth;
        rep.violation = os.str();
    }

    // Doubling: smallest c2 on a geometric ladder with 2 Omega(x) <= Omega(c2 x)
    // for every sample.  Omega(c2 x) may be evaluated beyond r_max; the closed
    // forms extend globally.
    const int n_c2 = 400;
    rep.best_c2 = 0.0;
    rep.doubling_holds = false;
    for (int i = 1; i <= n_c2; ++i) {
        const double c2 = std::pow(c2_max, static_cast<double>(i) / n_c2);
        bool ok = true;
        double worst = 0.0;
        for (double x : xs) {
            const double lhs = 2.0 * rel.omega_radial(x);
            const double rhs = rel.omega_radial(c2 * x);
            if (lhs > rhs * (1.0 + 1e-12)) {
                ok = false;
                worst = x;
                break;
            }
        }
        if (ok) {
            rep.best_c2 = c2;
            rep.doubling_holds = true;
            break;
        }
        rep.worst_x_doubling = worst;
    }
    if (!rep.doubling_holds && rep.violation.empty()) {
        std::ostringstream os;
        os << "doubling 2 Omega(x) <= Omega(c2 x) fails for all c2 <= " << c2_max
           << " (last failure at x = " << rep.worst_x_doubling << ")";
        rep.violation = os.str();
    }

    rel.verified_ = rep.all_hold();
    if (rel.verified_) {
        rel.c1_ = rep.best_c1;
        rel.c2_ = rep.best_c2;
        rel.certified_radius_ = r_max;
    }
    return rep;
}

}  // namespace wavekin
