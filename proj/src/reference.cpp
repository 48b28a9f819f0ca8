#include "wavekin/reference.hpp"

namespace wavekin {

namespace {

// Outer trapezoid sweep: calls body(xi1, w1) for every grid point.
template <typename Body>
void outer_sweep(const GridSpec& gs, Body&& body) {
    const int n = gs.n;
    const double h = gs.h();
    for (int ix = 0; ix < n; ++ix) {
        const double wx = (ix == 0 || ix == n - 1) ? 0.5 * h : h;
        for (int iy = 0; iy < n; ++iy) {
            const double wy = (iy == 0 || iy == n - 1) ? 0.5 * h : h;
            for (int iz = 0; iz < n; ++iz) {
                const double wz = (iz == 0 || iz == n - 1) ? 0.5 * h : h;
                const Vec3 xi1{-gs.k + ix * h, -gs.k + iy * h, -gs.k + iz * h};
                body(xi1, wx * wy * wz);
            }
        }
    }
}

}  // namespace

double reference_c1_apply(const DispersionRelation& rel, const GridField& f, const GridField& g,
                          const GridField& h, const Vec3& xi, const QuadConfig& cfg) {
    double acc = 0.0;
    outer_sweep(f.spec(), [&](const Vec3& xi1, double w1) {
        const ResonantQuadrature quad = build_manifold_quadrature(rel, {xi, xi1}, cfg);
        if (quad.degenerate) return;
        const Vec3 rho = quad.rho;
        acc += w1 * f(xi1) *
               manifold_integrate(quad, [&](const Vec3& z) { return g(z) * h(rho - z); });
    });
    return acc;
}

double reference_q2_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                          const Vec3& xi, const QuadConfig& cfg) {
    double acc = 0.0;
    outer_sweep(g.spec(), [&](const Vec3& xi1, double w1) {
        const ResonantQuadrature quad = build_manifold_quadrature(rel, {xi, xi1}, cfg);
        if (quad.degenerate) return;
        const Vec3 rho = quad.rho;
        acc += w1 * manifold_integrate(quad, [&](const Vec3& z) { return g(z) * h(rho - z); });
    });
    return acc;
}

double reference_q3_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                          const Vec3& xi, const QuadConfig& cfg, bool reflected) {
    double acc = 0.0;
    outer_sweep(g.spec(), [&](const Vec3& xi1, double w1) {
        const ResonantQuadrature quad = build_manifold_quadrature(rel, {xi, xi1}, cfg);
        if (quad.degenerate) return;
        const Vec3 rho = quad.rho;
        const double inner =
            reflected ? manifold_integrate(quad, [&](const Vec3& z) { return h(rho - z); })
                      : manifold_integrate(quad, [&](const Vec3& z) { return h(z); });
        acc += w1 * g(xi1) * inner;
    });
    return acc;
}

GridField reference_collision_apply(const DispersionRelation& rel, const GridField& f,
                                    const QuadConfig& cfg) {
    const GridSpec gs = f.spec();
    GridField out(gs);
    for (int ix = 0; ix < gs.n; ++ix) {
        for (int iy = 0; iy < gs.n; ++iy) {
            for (int iz = 0; iz < gs.n; ++iz) {
                const Vec3 xi = out.point(ix, iy, iz);
                const double fv = f.at(ix, iy, iz);
                out.at(ix, iy, iz) =
                    reference_c1_apply(rel, f, f, f, xi, cfg) +
                    fv * (reference_q2_apply(rel, f, f, xi, cfg) -
                          reference_q3_apply(rel, f, f, xi, cfg, false) -
                          reference_q3_apply(rel, f, f, xi, cfg, true));
            }
        }
    }
    return out;
}

}  // namespace wavekin
