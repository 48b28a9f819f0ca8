#include "wavekin/collision.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

constexpr unsigned kNeedK1 = 1u;
constexpr unsigned kNeedM2 = 2u;
constexpr unsigned kNeedM3 = 4u;
constexpr unsigned kNeedM4 = 8u;
constexpr unsigned kNeedAll = kNeedK1 | kNeedM2 | kNeedM3 | kNeedM4;

struct PointAccum {
    double k1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

void check_same_spec(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw ParameterOutOfRange("grid fields must share one GridSpec");
}

// One output point: outer trapezoid sweep over the xi1 grid, one surface
// quadrature per pair, all requested kernels accumulated from it.
//   k1 += w1 a(xi1) * sum wg b(z) c(rho-z)
//   m2 += w1         sum wg b(z) c(rho-z)
//   m4 += w1 b(xi1) * sum wg c(z)
//   m3 += w1 b(xi1) * sum wg c(rho-z)
PointAccum accumulate_point(const DispersionRelation& rel, const GridField* a, const GridField& b,
                            const GridField& c, const Vec3& xi, unsigned need,
                            const QuadConfig& cfg, QuadWorkspace& ws) {
    const GridSpec gs = b.spec();
    const int n = gs.n;
    const double h = gs.h();
    const bool need_pair = need & (kNeedK1 | kNeedM2);
    const bool need_z = need & kNeedM4;
    const bool need_r = need & kNeedM3;
    const bool need_outer_b = need_z || need_r;
    const bool can_skip = cfg.outer_skip_abs > 0.0 && !(need & kNeedM2);

    PointAccum acc;
    PhasePair pair;
    pair.xi = xi;

    for (int ix = 0; ix < n; ++ix) {
        const double wx = (ix == 0 || ix == n - 1) ? 0.5 * h : h;
        const double x1 = -gs.k + ix * h;
        for (int iy = 0; iy < n; ++iy) {
            const double wy = (iy == 0 || iy == n - 1) ? 0.5 * h : h;
            const double y1 = -gs.k + iy * h;
            const size_t row = (static_cast<size_t>(ix) * n + iy) * n;
            for (int iz = 0; iz < n; ++iz) {
                const double wz = (iz == 0 || iz == n - 1) ? 0.5 * h : h;
                const double w1 = wx * wy * wz;

                const double av = a ? a->values()[row + iz] : 0.0;
                const double bv1 = need_outer_b ? b.values()[row + iz] : 0.0;
                if (can_skip && std::fabs(av) <= cfg.outer_skip_abs &&
                    std::fabs(bv1) <= cfg.outer_skip_abs) {
                    continue;
                }

                pair.xi1 = {x1, y1, -gs.k + iz * h};
                build_quadrature_inplace(rel, pair, cfg, ws);
                if (ws.degenerate || ws.nodes.empty()) continue;

                const Vec3 rho = ws.rho;
                double ibc = 0.0, icz = 0.0, icr = 0.0;
                const size_t nq = ws.nodes.size();
                for (size_t q = 0; q < nq; ++q) {
                    const double wg = ws.weights[q] / ws.grad_norms[q];
                    const Vec3& z = ws.nodes[q];
                    if (need_pair || need_r) {
                        const double cr = c(rho - z);
                        if (need_pair) ibc += wg * b(z) * cr;
                        if (need_r) icr += wg * cr;
                    }
                    if (need_z) icz += wg * c(z);
                }
                if (need & kNeedK1) acc.k1 += w1 * av * ibc;
                if (need & kNeedM2) acc.m2 += w1 * ibc;
                if (need & kNeedM4) acc.m4 += w1 * bv1 * icz;
                if (need & kNeedM3) acc.m3 += w1 * bv1 * icr;
            }
        }
    }
    return acc;
}

double bracket_weight(const Vec3& v, double p) { return jbracket_pow(v, p); }

}  // namespace

double c1_apply(const DispersionRelation& rel, const GridField& f, const GridField& g,
                const GridField& h, const Vec3& xi, const QuadConfig& cfg) {
    check_same_spec(f.spec(), g.spec());
    check_same_spec(f.spec(), h.spec());
    QuadWorkspace ws;
    return accumulate_point(rel, &f, g, h, xi, kNeedK1, cfg, ws).k1;
}

double q2_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                const Vec3& xi, const QuadConfig& cfg) {
    check_same_spec(g.spec(), h.spec());
    QuadWorkspace ws;
    return accumulate_point(rel, nullptr, g, h, xi, kNeedM2, cfg, ws).m2;
}

double q3_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                const Vec3& xi, const QuadConfig& cfg, bool reflected) {
    check_same_spec(g.spec(), h.spec());
    QuadWorkspace ws;
    const PointAccum acc =
        accumulate_point(rel, nullptr, g, h, xi, reflected ? kNeedM3 : kNeedM4, cfg, ws);
    return reflected ? acc.m3 : acc.m4;
}

CollisionTerms collision_terms(const DispersionRelation& rel, const GridField& f, const Vec3& xi,
                               const QuadConfig& cfg, QuadWorkspace& ws) {
    const PointAccum acc = accumulate_point(rel, &f, f, f, xi, kNeedAll, cfg, ws);
    const double fv = f(xi);
    CollisionTerms t;
    t.gain_tri = acc.k1;
    t.gain_pair = fv * acc.m2;
    t.loss_z = fv * acc.m4;
    t.loss_r = fv * acc.m3;
    return t;
}

double collision_point(const DispersionRelation& rel, const GridField& f, const Vec3& xi,
                       const QuadConfig& cfg) {
    QuadWorkspace ws;
    return collision_terms(rel, f, xi, cfg, ws).value();
}

double gain_point(const DispersionRelation& rel, const GridField& f, const Vec3& xi,
                  const QuadConfig& cfg) {
    QuadWorkspace ws;
    return collision_terms(rel, f, xi, cfg, ws).gain();
}

GridField collision_apply(const DispersionRelation& rel, const GridField& f,
                          const QuadConfig& cfg) {
    const GridSpec gs = f.spec();
    GridField out(gs);
    const long long total = static_cast<long long>(gs.size());

#pragma omp parallel
    {
        QuadWorkspace ws;
#pragma omp for schedule(dynamic)
        for (long long idx = 0; idx < total; ++idx) {
            const int iz = static_cast<int>(idx % gs.n);
            const int iy = static_cast<int>((idx / gs.n) % gs.n);
            const int ix = static_cast<int>(idx / (static_cast<long long>(gs.n) * gs.n));
            const Vec3 xi = out.point(ix, iy, iz);
            const PointAccum acc = accumulate_point(rel, &f, f, f, xi, kNeedAll, cfg, ws);
            const double fv = f.values()[idx];
            out.values()[idx] = acc.k1 + fv * (acc.m2 - acc.m4 - acc.m3);
        }
    }
    return out;
}

KernelFields kernel_fields(const DispersionRelation& rel, const GridField& a, const GridField& b,
                           const GridField& c, const QuadConfig& cfg) {
    check_same_spec(a.spec(), b.spec());
    check_same_spec(a.spec(), c.spec());
    const GridSpec gs = a.spec();
    KernelFields kf{GridField(gs), GridField(gs), GridField(gs), GridField(gs)};
    const long long total = static_cast<long long>(gs.size());

#pragma omp parallel
    {
        QuadWorkspace ws;
#pragma omp for schedule(dynamic)
        for (long long idx = 0; idx < total; ++idx) {
            const int iz = static_cast<int>(idx % gs.n);
            const int iy = static_cast<int>((idx / gs.n) % gs.n);
            const int ix = static_cast<int>(idx / (static_cast<long long>(gs.n) * gs.n));
            const Vec3 xi = kf.k1.point(ix, iy, iz);
            const PointAccum acc = accumulate_point(rel, &a, b, c, xi, kNeedAll, cfg, ws);
            kf.k1.values()[idx] = acc.k1;
            kf.m2.values()[idx] = acc.m2;
            kf.m3.values()[idx] = acc.m3;
            kf.m4.values()[idx] = acc.m4;
        }
    }
    return kf;
}

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::lemma_C1: return "lemma_C1";
        case BoundKind::lemma_C2: return "lemma_C2";
        case BoundKind::lemma_C3: return "lemma_C3";
    }
    return "lemma_C1";
}

BoundKind bound_kind_from_string(const std::string& s) {
    if (s == "lemma_C1") return BoundKind::lemma_C1;
    if (s == "lemma_C2") return BoundKind::lemma_C2;
    if (s == "lemma_C3") return BoundKind::lemma_C3;
    throw ParameterOutOfRange("unknown bound kind: " + s);
}

std::vector<Vec3> default_probe_set(double k_box) {
    std::vector<Vec3> probes;
    probes.push_back({0.0, 0.0, 0.0});
    const double inv_r3 = 1.0 / std::sqrt(3.0);
    const double inv_r2 = 1.0 / std::sqrt(2.0);
    const Vec3 dirs[] = {
        {1.0, 0.0, 0.0},          {0.0, 1.0, 0.0},           {0.0, 0.0, 1.0},
        {inv_r2, inv_r2, 0.0},    {inv_r3, inv_r3, inv_r3},  {-inv_r3, inv_r3, inv_r3},
    };
    const double radii[] = {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, k_box, 1.5 * k_box, 2.0 * k_box};
    for (const Vec3& d : dirs) {
        for (double r : radii) probes.push_back(r * d);
    }
    return probes;
}

namespace {

void validate_bound_params(double s, double gamma, BoundKind kind) {
    if (!(s > 2.0)) throw ParameterOutOfRange("bound estimate requires s > 2");
    if (!(gamma >= 0.0) || !(gamma < s - 2.0)) {
        throw ParameterOutOfRange("bound estimate requires 0 <= gamma < s - 2");
    }
    if (kind == BoundKind::lemma_C1 && !(gamma < 1.0)) {
        throw ParameterOutOfRange("the trilinear gain bound additionally requires gamma < 1");
    }
}

}  // namespace

double bound_integrand_at(const DispersionRelation& rel, double s, double gamma, BoundKind kind,
                          const Vec3& xi, const GridSpec& grid, const QuadConfig& quad) {
    const int n = grid.n;
    const double h = grid.h();
    QuadWorkspace ws;
    PhasePair pair;
    pair.xi = xi;

    double outer = 0.0;
    for (int ix = 0; ix < n; ++ix) {
        const double wx = (ix == 0 || ix == n - 1) ? 0.5 * h : h;
        for (int iy = 0; iy < n; ++iy) {
            const double wy = (iy == 0 || iy == n - 1) ? 0.5 * h : h;
            for (int iz = 0; iz < n; ++iz) {
                const double wz = (iz == 0 || iz == n - 1) ? 0.5 * h : h;
                pair.xi1 = {-grid.k + ix * h, -grid.k + iy * h, -grid.k + iz * h};

                const double outer_w =
                    (kind == BoundKind::lemma_C2) ? 1.0 : bracket_weight(pair.xi1, -s);

                build_quadrature_inplace(rel, pair, quad, ws);
                if (ws.degenerate || ws.nodes.empty()) continue;

                const Vec3 rho = ws.rho;
                double inner = 0.0;
                for (size_t q = 0; q < ws.nodes.size(); ++q) {
                    const double wg = ws.weights[q] / ws.grad_norms[q];
                    const Vec3& z = ws.nodes[q];
                    double val = bracket_weight(z, -s);
                    if (kind == BoundKind::lemma_C2) val *= bracket_weight(rho - z, -s);
                    inner += wg * val;
                }
                outer += wx * wy * wz * outer_w * inner;
            }
        }
    }
    return bracket_weight(xi, gamma) * outer;
}

BoundEstimate estimate_bound_constant(const DispersionRelation& rel, double s, double gamma,
                                      BoundKind kind, const ConstantSearchConfig& cfg) {
    validate_bound_params(s, gamma, kind);
    const std::vector<Vec3> probes =
        cfg.probes.empty() ? default_probe_set(cfg.grid.k) : cfg.probes;

    BoundEstimate est;
    est.kind = kind;
    est.s = s;
    est.gamma = gamma;

    const int np = static_cast<int>(probes.size());
    std::vector<double> vals(np, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < np; ++i) {
        vals[i] = bound_integrand_at(rel, s, gamma, kind, probes[i], cfg.grid, cfg.quad);
    }
    for (int i = 0; i < np; ++i) {
        if (vals[i] > est.m_est) {
            est.m_est = vals[i];
            est.argmax_xi = probes[i];
        }
    }
    return est;
}

NormCheckReport operator_norm_check(const DispersionRelation& rel, BoundKind kind, double s,
                                    double gamma, const std::vector<TrialTriple>& trials,
                                    const ConstantSearchConfig& cfg) {
    validate_bound_params(s, gamma, kind);
    const BoundEstimate est = estimate_bound_constant(rel, s, gamma, kind, cfg);
    const std::vector<Vec3> probes =
        cfg.probes.empty() ? default_probe_set(cfg.grid.k) : cfg.probes;

    NormCheckReport rep;
    rep.m_est = est.m_est;
    rep.n_triples = static_cast<int>(trials.size());

    QuadWorkspace ws;
    for (const TrialTriple& t : trials) {
        const double bound =
            est.m_est * weighted_field_norm(*t.f, s) * weighted_field_norm(*t.g, s) *
            weighted_field_norm(*t.h, s);
        for (const Vec3& xi : probes) {
            double out = 0.0;
            switch (kind) {
                case BoundKind::lemma_C1:
                    out = accumulate_point(rel, t.f, *t.g, *t.h, xi, kNeedK1, cfg.quad, ws).k1;
                    break;
                case BoundKind::lemma_C2:
                    out = (*t.f)(xi) *
                          accumulate_point(rel, nullptr, *t.g, *t.h, xi, kNeedM2, cfg.quad, ws).m2;
                    break;
                case BoundKind::lemma_C3:
                    out = (*t.f)(xi) *
                          accumulate_point(rel, nullptr, *t.g, *t.h, xi, kNeedM4, cfg.quad, ws).m4;
                    break;
            }
            const double weighted = bracket_weight(xi, s + gamma) * std::fabs(out);
            if (bound > 0.0) {
                const double ratio = weighted / bound;
                if (ratio > rep.max_ratio) {
                    rep.max_ratio = ratio;
                    rep.argmax_xi = xi;
                }
            }
        }
    }
    return rep;
}

}  // namespace wavekin
