#include "wavekin/wke.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

// Same per-point expression as collision_apply, so T[f,f,f] matches it bitwise.
GridField assemble_trilinear(const GridField& a, const KernelFields& kf) {
    GridField out(a.spec());
    const std::vector<double>& av = a.values();
    const std::vector<double>& k1 = kf.k1.values();
    const std::vector<double>& m2 = kf.m2.values();
    const std::vector<double>& m3 = kf.m3.values();
    const std::vector<double>& m4 = kf.m4.values();
    std::vector<double>& ov = out.values();
    for (std::size_t i = 0; i < ov.size(); ++i) {
        ov[i] = k1[i] + av[i] * (m2[i] - m4[i] - m3[i]);
    }
    return out;
}

WkeDiagnostics diagnostics_row(const DispersionRelation& rel, const GridField& f, double t,
                               double s) {
    WkeDiagnostics d;
    d.time = t;
    d.mass = trapezoid_integral(f);
    d.energy = trapezoid_integral(f, [&](const Vec3& p) { return rel.omega(p); });
    d.norm_s = weighted_field_norm(f, s);
    d.min_value = *std::min_element(f.values().begin(), f.values().end());
    return d;
}

}  // namespace

GridField trilinear_apply(const DispersionRelation& rel, const GridField& a, const GridField& b,
                          const GridField& c, const QuadConfig& cfg) {
    KernelFields kf = kernel_fields(rel, a, b, c, cfg);
    return assemble_trilinear(a, kf);
}

GridField PicardPolynomial::eval(double t) const {
    if (coeffs.empty()) throw ParameterOutOfRange("picard polynomial: no coefficients");
    GridField acc = coeffs.back();
    for (int p = static_cast<int>(coeffs.size()) - 2; p >= 0; --p) {
        acc = field_axpy(t, acc, coeffs[p]);
    }
    return acc;
}

PicardPolynomial picard_polynomial(const DispersionRelation& rel, const GridField& f0, int depth,
                                   const QuadConfig& cfg) {
    if (depth < 0) throw ParameterOutOfRange("picard depth must be >= 0");
    PicardPolynomial p;
    p.coeffs.push_back(f0);
    for (int iter = 1; iter <= depth; ++iter) {
        const int nc = static_cast<int>(p.coeffs.size());
        // q(t) = C[p(t)] expanded over ordered coefficient triples.
        std::vector<GridField> q(static_cast<std::size_t>(3 * (nc - 1) + 1), GridField(f0.spec()));
        for (int ia = 0; ia < nc; ++ia) {
            if (sup_norm(p.coeffs[static_cast<std::size_t>(ia)]) == 0.0) continue;
            for (int ib = 0; ib < nc; ++ib) {
                if (sup_norm(p.coeffs[static_cast<std::size_t>(ib)]) == 0.0) continue;
                for (int ic = 0; ic < nc; ++ic) {
                    if (sup_norm(p.coeffs[static_cast<std::size_t>(ic)]) == 0.0) continue;
                    GridField term =
                        trilinear_apply(rel, p.coeffs[static_cast<std::size_t>(ia)],
                                        p.coeffs[static_cast<std::size_t>(ib)],
                                        p.coeffs[static_cast<std::size_t>(ic)], cfg);
                    GridField& slot = q[static_cast<std::size_t>(ia + ib + ic)];
                    slot = field_axpy(1.0, term, slot);
                }
            }
        }
        PicardPolynomial next;
        next.coeffs.reserve(q.size() + 1);
        next.coeffs.push_back(f0);
        for (std::size_t s = 0; s < q.size(); ++s) {
            next.coeffs.push_back(field_scale(1.0 / static_cast<double>(s + 1), q[s]));
        }
        p = std::move(next);
    }
    return p;
}

GridField picard_iterate(const DispersionRelation& rel, const GridField& f0, double t, int depth,
                         const QuadConfig& cfg) {
    return picard_polynomial(rel, f0, depth, cfg).eval(t);
}

double suggested_dt(double m_est, double norm0, double margin) {
    if (!(m_est > 0.0) || !(margin > 0.0)) {
        throw ParameterOutOfRange("suggested_dt: m_est and margin must be positive");
    }
    if (norm0 == 0.0) return margin;  // zero datum: any step is exact
    return margin / (m_est * norm0 * norm0);
}

WkeTrajectory solve_wke(const DispersionRelation& rel, const GridField& f0, double t_final,
                        const WkeMethod& method, const QuadConfig& cfg, double s, int n_out) {
    if (!(t_final > 0.0)) throw ParameterOutOfRange("solve_wke: t_final must be positive");
    if (!(s > 2.0)) throw ParameterOutOfRange("solve_wke: weighted norm requires s > 2");

    const double norm0 = weighted_field_norm(f0, s);
    const double norm_limit = 4.0 * norm0;
    WkeTrajectory traj;

    auto record = [&](double t, GridField&& f) {
        WkeDiagnostics d = diagnostics_row(rel, f, t, s);
        if (d.norm_s > norm_limit) {
            throw StepRejected("solve_wke: weighted norm " + std::to_string(d.norm_s) +
                               " exceeds 4x initial norm at t=" + std::to_string(t));
        }
        traj.times.push_back(t);
        traj.diagnostics.push_back(d);
        traj.states.push_back(std::move(f));
    };

    if (method.kind == WkeMethod::Kind::picard) {
        PicardPolynomial poly = picard_polynomial(rel, f0, method.depth, cfg);
        const int intervals = n_out > 0 ? n_out : 8;
        record(0.0, GridField(f0));
        for (int i = 1; i <= intervals; ++i) {
            const double t = t_final * static_cast<double>(i) / static_cast<double>(intervals);
            record(t, poly.eval(t));
        }
        return traj;
    }

    if (!(method.dt > 0.0)) throw ParameterOutOfRange("solve_wke: rk4 requires dt > 0");
    auto rhs = [&](const GridField& f) {
        if (sup_norm(f) == 0.0) return GridField(f.spec());  // zero is an exact fixed point
        return collision_apply(rel, f, cfg);
    };

    const int n_steps = static_cast<int>(std::ceil(t_final / method.dt - 1e-9));
    GridField f = f0;
    record(0.0, GridField(f0));
    for (int i = 0; i < n_steps; ++i) {
        const double t0 = method.dt * static_cast<double>(i);
        const double h = std::min(method.dt, t_final - t0);
        GridField k1 = rhs(f);
        GridField k2 = rhs(field_axpy(0.5 * h, k1, f));
        GridField k3 = rhs(field_axpy(0.5 * h, k2, f));
        GridField k4 = rhs(field_axpy(h, k3, f));
        GridField acc = field_axpy(2.0, k2, k1);
        acc = field_axpy(2.0, k3, acc);
        acc = field_axpy(1.0, k4, acc);
        f = field_axpy(h / 6.0, acc, f);
        const double t1 = (i + 1 == n_steps) ? t_final : t0 + h;
        record(t1, GridField(f));
    }
    return traj;
}

}  // namespace wavekin
