#include "wavekin/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <omp.h>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
    const double n = norm(v);
    if (n < 1e-14) return fallback;
    return (1.0 / n) * v;
}

void refresh_trig(QuadWorkspace& ws, int ns, int na) {
    if (ws.trig_ns == ns && ws.trig_na == na) return;
    ws.trig_ns = ns;
    ws.trig_na = na;
    ws.sin_t.resize(ns);
    ws.cos_t.resize(ns);
    ws.sin_p.resize(na);
    ws.cos_p.resize(na);
    for (int i = 0; i < ns; ++i) {
        const double th = kPi * (i + 0.5) / ns;
        ws.sin_t[i] = std::sin(th);
        ws.cos_t[i] = std::cos(th);
    }
    for (int k = 0; k < na; ++k) {
        const double ph = 2.0 * kPi * (k + 0.5) / na;
        ws.sin_p[k] = std::sin(ph);
        ws.cos_p[k] = std::cos(ph);
    }
}

}  // namespace

double phase_value(const DispersionRelation& rel, const PhasePair& pair, const Vec3& z) {
    const Vec3 rho = pair.xi + pair.xi1;
    return rel.omega(rho - z) + rel.omega(z) - rel.omega(pair.xi) - rel.omega(pair.xi1);
}

double phase_gradient_norm(const DispersionRelation& rel, const PhasePair& pair, const Vec3& z) {
    const Vec3 rho = pair.xi + pair.xi1;
    const double scale = 1.0 + norm(rho);
    const Vec3 axis = unit_or(rho, Vec3{0.0, 0.0, 1.0});

    const Vec3 d1 = z - rho;
    const double n1 = norm(d1);
    const Vec3 u1 = (n1 < 1e-14 * scale) ? axis : (1.0 / n1) * d1;

    const double n2 = norm(z);
    const Vec3 u2 = (n2 < 1e-14 * scale) ? axis : (1.0 / n2) * z;

    const Vec3 g = rel.omega_prime(n1) * u1 + rel.omega_prime(n2) * u2;
    return norm(g);
}

double surface_radius_bound(const DispersionRelation& rel, const PhasePair& pair) {
    const double w = rel.omega(pair.xi) + rel.omega(pair.xi1);
    double lo = std::max(norm(pair.xi), norm(pair.xi1));
    if (rel.omega_radial(lo) >= w) return lo;
    double hi = std::max(1.0, 2.0 * lo);
    int guard = 0;
    while (rel.omega_radial(hi) < w) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200) {
            throw RootNotBracketed("surface_radius_bound: dispersion never reaches pair energy");
        }
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rel.omega_radial(mid) < w) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

namespace {

// Slice geometry of the phase surface in the cylindrical frame of the pair:
// z = alpha * rho + r * (cos phi e1 + sin phi e2).  The phase depends only on
// (alpha, r) through a = |z| and b = |rho - z|, and is strictly increasing in
// r, so each axial station carries at most one circle.
struct SliceProblem {
    const DispersionRelation* rel;
    double p;  // |rho|
    double w;  // omega(xi) + omega(xi1)

    double axial(double alpha) const {
        return rel->omega_radial(p * std::fabs(1.0 - alpha)) +
               rel->omega_radial(p * std::fabs(alpha)) - w;
    }
    double at(double alpha, double r) const {
        const double a = std::sqrt(alpha * alpha * p * p + r * r);
        const double b = std::sqrt((1.0 - alpha) * (1.0 - alpha) * p * p + r * r);
        return rel->omega_radial(b) + rel->omega_radial(a) - w;
    }
};

}  // namespace

void build_quadrature_inplace(const DispersionRelation& rel, const PhasePair& pair,
                              const QuadConfig& cfg, QuadWorkspace& ws) {
    if (!rel.verified()) {
        throw UnverifiedDispersion(
            "build_manifold_quadrature: dispersion relation is not verified; run "
            "verify_assumptions first");
    }
    if (cfg.n_slices < 2 || cfg.n_angular < 2) {
        throw ParameterOutOfRange("quadrature needs n_slices >= 2 and n_angular >= 2");
    }

    const int ns = cfg.n_slices;
    const int na = cfg.n_angular;
    refresh_trig(ws, ns, na);

    ws.nodes.clear();
    ws.weights.clear();
    ws.grad_norms.clear();
    ws.degenerate = false;

    const Vec3 rho = pair.xi + pair.xi1;
    ws.rho = rho;
    ws.alpha_lo = ws.alpha_hi = 0.0;

    const double p = norm(rho);
    const double w_pair = rel.omega(pair.xi) + rel.omega(pair.xi1);
    const double scale = 1.0 + std::max(norm(pair.xi), norm(pair.xi1));
    const double res_tol = cfg.root_tol * std::max(1.0, std::fabs(w_pair));
    const bool schro = rel.kind() == DispersionKind::schrodinger;

    if (schro && norm(pair.xi - pair.xi1) < 1e-8) {
        ws.degenerate = true;
        return;
    }

    const size_t n_nodes = static_cast<size_t>(ns) * na;
    ws.nodes.reserve(n_nodes);
    ws.weights.reserve(n_nodes);
    ws.grad_norms.reserve(n_nodes);

    const double dtheta = kPi / ns;
    const double dphi = 2.0 * kPi / na;

    if (p < 1e-12 * scale) {
        // Opposite pair: the surface is the single sphere 2 Omega(r) = w.
        double lo = 0.0, hi = surface_radius_bound(rel, pair);
        if (2.0 * rel.omega_radial(hi) < w_pair) hi *= 2.0;
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (2.0 * rel.omega_radial(mid) < w_pair) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double rstar = 0.5 * (lo + hi);
        if (rstar < 1e-8) {
            ws.degenerate = true;
            return;
        }
        const double gn = 2.0 * rel.omega_prime(rstar);
        const double warea = rstar * rstar * dtheta * dphi;
        for (int i = 0; i < ns; ++i) {
            const double st = ws.sin_t[i], ct = ws.cos_t[i];
            for (int k = 0; k < na; ++k) {
                ws.nodes.push_back(
                    {rstar * st * ws.cos_p[k], rstar * st * ws.sin_p[k], rstar * ct});
                ws.weights.push_back(warea * st);
                ws.grad_norms.push_back(gn);
            }
        }
        return;
    }

    // Frame: axis u along rho, e1/e2 spanning the orthogonal plane.
    const Vec3 u = (1.0 / p) * rho;
    Vec3 seed{1.0, 0.0, 0.0};
    const double ax = std::fabs(u.x), ay = std::fabs(u.y), az = std::fabs(u.z);
    if (ay <= ax && ay <= az) {
        seed = {0.0, 1.0, 0.0};
    } else if (az <= ax && az <= ay) {
        seed = {0.0, 0.0, 1.0};
    }
    Vec3 e1 = seed - dot(seed, u) * u;
    e1 = (1.0 / norm(e1)) * e1;
    const Vec3 e2 = cross(u, e1);

    const SliceProblem sp{&rel, p, w_pair};

    // Axial extent {alpha : axial(alpha) <= 0}; symmetric about 1/2.  The
    // projection of xi onto the axis is always inside it.
    double alpha_hi;
    double r_big = 0.0;  // schrodinger circle radius
    if (schro) {
        r_big = 0.5 * norm(pair.xi - pair.xi1);
        alpha_hi = 0.5 + r_big / p;
    } else {
        const double alpha_xi = dot(pair.xi, rho) / (p * p);
        double a = std::max(alpha_xi, 1.0 - alpha_xi);
        if (sp.axial(a) > 0.0) a = 0.5;
        if (sp.axial(a) > 0.0) {
            ws.degenerate = true;
            return;
        }
        double step = std::max(0.25, 0.5 * (a - 0.5));
        double b = a + step;
        int guard = 0;
        while (sp.axial(b) <= 0.0) {
            a = b;
            step *= 2.0;
            b = a + step;
            if (++guard > 200) {
                throw RootNotBracketed("axial extent of the resonance surface did not close");
            }
        }
        for (int it = 0; it < 90; ++it) {
            const double mid = 0.5 * (a + b);
            if (sp.axial(mid) <= 0.0) {
                a = mid;
            } else {
                b = mid;
            }
        }
        alpha_hi = 0.5 * (a + b);
    }
    const double e_half = alpha_hi - 0.5;
    ws.alpha_lo = 1.0 - alpha_hi;
    ws.alpha_hi = alpha_hi;
    if (e_half * p < 1e-8) {
        ws.degenerate = true;
        return;
    }

    const double r_cap = cfg.r_search_max > 0.0 ? cfg.r_search_max
                                                : surface_radius_bound(rel, pair) + 1.0;

    for (int i = 0; i < ns; ++i) {
        const double st = ws.sin_t[i], ct = ws.cos_t[i];
        const double alpha = 0.5 + e_half * ct;

        double r;
        if (schro) {
            r = r_big * st;
        } else {
            // Bisection on the strictly increasing radial section, then a
            // short Newton polish.
            double lo = 0.0, hi = r_cap;
            if (sp.at(alpha, 0.0) > 0.0) {
                r = 0.0;
            } else {
                if (sp.at(alpha, hi) < 0.0) {
                    std::ostringstream os;
                    os << "slice radius exceeds search radius " << r_cap
                       << " (working box too small)";
                    throw RootNotBracketed(os.str());
                }
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (sp.at(alpha, mid) < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                r = 0.5 * (lo + hi);
                for (int it = 0; it < 8; ++it) {
                    const double g = sp.at(alpha, r);
                    if (std::fabs(g) <= res_tol) break;
                    const double a_len = std::sqrt(alpha * alpha * p * p + r * r);
                    const double b_len =
                        std::sqrt((1.0 - alpha) * (1.0 - alpha) * p * p + r * r);
                    const double dcoef = rel.omega_prime(a_len) / std::max(a_len, 1e-300) +
                                         rel.omega_prime(b_len) / std::max(b_len, 1e-300);
                    const double gp = r * dcoef;
                    if (!(gp > 0.0)) break;
                    const double rn = r - g / gp;
                    if (rn <= lo || rn >= hi) break;
                    r = rn;
                }
            }
        }

        // Surface element and |grad G| from the implicit slice description:
        //   r dr/dalpha = -dG/dalpha / D,  D = Om'(a)/a + Om'(b)/b,
        //   dA = sqrt((p r)^2 + (r r')^2) dalpha dphi,
        //   |grad G| = sqrt((r D)^2 + (dG/dalpha / p)^2).
        const double a_len = std::sqrt(alpha * alpha * p * p + r * r);
        const double b_len = std::sqrt((1.0 - alpha) * (1.0 - alpha) * p * p + r * r);
        const double qa = rel.omega_prime(a_len) / std::max(a_len, 1e-300);
        const double qb = rel.omega_prime(b_len) / std::max(b_len, 1e-300);
        const double dcoef = qa + qb;
        const double dg_dalpha = p * p * (alpha * qa - (1.0 - alpha) * qb);
        const double r_rp = (dcoef > 0.0) ? -dg_dalpha / dcoef : 0.0;
        const double area = std::sqrt(p * p * r * r + r_rp * r_rp) * e_half * st * dtheta * dphi;
        const double gn = std::sqrt(r * dcoef * r * dcoef + (dg_dalpha / p) * (dg_dalpha / p));
        if (!(gn > 0.0) || !(area >= 0.0)) continue;

        const Vec3 axial_part = alpha * rho;
        for (int k = 0; k < na; ++k) {
            const double c1 = r * ws.cos_p[k];
            const double c2 = r * ws.sin_p[k];
            ws.nodes.push_back({axial_part.x + c1 * e1.x + c2 * e2.x,
                                axial_part.y + c1 * e1.y + c2 * e2.y,
                                axial_part.z + c1 * e1.z + c2 * e2.z});
            ws.weights.push_back(area);
            ws.grad_norms.push_back(gn);
        }
    }
}

ResonantQuadrature build_manifold_quadrature(const DispersionRelation& rel, const PhasePair& pair,
                                             const QuadConfig& cfg) {
    QuadWorkspace ws;
    build_quadrature_inplace(rel, pair, cfg, ws);
    ResonantQuadrature q;
    q.nodes = ws.nodes;
    q.weights = ws.weights;
    q.grad_norms = ws.grad_norms;
    q.degenerate = ws.degenerate;
    q.rho = ws.rho;
    q.alpha_lo = ws.alpha_lo;
    q.alpha_hi = ws.alpha_hi;
    q.n_slices = cfg.n_slices;
    q.n_angular = cfg.n_angular;
    return q;
}

double manifold_integrate(const ResonantQuadrature& quad,
                          const std::function<double(const Vec3&)>& integrand) {
    double acc = 0.0;
    for (size_t i = 0; i < quad.nodes.size(); ++i) {
        acc += quad.weights[i] * integrand(quad.nodes[i]) / quad.grad_norms[i];
    }
    return acc;
}

McEstimate mollified_delta_integral(const DispersionRelation& rel, const PhasePair& pair,
                                    const std::function<double(const Vec3&)>& integrand,
                                    double eta, long long n_samples, unsigned long long seed) {
    if (!(eta > 0.0) || n_samples < 1000) {
        throw ParameterOutOfRange("mollified_delta_integral: need eta > 0, n >= 1000");
    }
    const double r_bound = surface_radius_bound(rel, pair);
    const double half = r_bound + 6.0 * eta + 0.25;
    const double vol = 8.0 * half * half * half;
    const double delta_norm = 1.0 / (eta * std::sqrt(2.0 * kPi));
    const double inv_two_eta2 = 1.0 / (2.0 * eta * eta);

    // Fixed block decomposition: the estimate is identical for any number of
    // threads.
    const int n_blocks = 512;
    std::vector<double> bsum(n_blocks, 0.0), bsq(n_blocks, 0.0);
    const long long base = n_samples / n_blocks;
    const long long rem = n_samples % n_blocks;

#pragma omp parallel for schedule(static)
    for (int b = 0; b < n_blocks; ++b) {
        std::mt19937_64 eng(seed + 0x9E3779B97F4A7C15ULL * static_cast<unsigned long long>(b + 1));
        const long long nb = base + (b < rem ? 1 : 0);
        double s = 0.0, s2 = 0.0;
        for (long long i = 0; i < nb; ++i) {
            // 53-bit uniforms, independent of distribution implementations.
            const double ux = (eng() >> 11) * 0x1.0p-53;
            const double uy = (eng() >> 11) * 0x1.0p-53;
            const double uz = (eng() >> 11) * 0x1.0p-53;
            const Vec3 z{half * (2.0 * ux - 1.0), half * (2.0 * uy - 1.0),
                         half * (2.0 * uz - 1.0)};
            const double g = phase_value(rel, pair, z);
            const double phi = delta_norm * std::exp(-g * g * inv_two_eta2) * integrand(z);
            s += phi;
            s2 += phi * phi;
        }
        bsum[b] = s;
        bsq[b] = s2;
    }

    double s = 0.0, s2 = 0.0;
    for (int b = 0; b < n_blocks; ++b) {
        s += bsum[b];
        s2 += bsq[b];
    }
    const double mean = s / static_cast<double>(n_samples);
    const double var = std::max(0.0, s2 / static_cast<double>(n_samples) - mean * mean);
    McEstimate est;
    est.value = vol * mean;
    est.std_error = vol * std::sqrt(var / static_cast<double>(n_samples));
    est.n = n_samples;
    return est;
}

}  // namespace wavekin
