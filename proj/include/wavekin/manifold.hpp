#pragma once

#include <functional>
#include <vector>

#include "wavekin/dispersion.hpp"
#include "wavekin/vec3.hpp"

namespace wavekin {

// Interaction pair (xi, xi1).  The four-wave resonance surface attached to it
// is the zero set of
//   G(z) = omega(xi + xi1 - z) + omega(z) - omega(xi) - omega(xi1).
struct PhasePair {
    Vec3 xi;
    Vec3 xi1;
};

double phase_value(const DispersionRelation& rel, const PhasePair& pair, const Vec3& z);

// |grad G|(z).  At z = 0 or z = xi + xi1 the radial unit vector of the
// singular term is taken as a one-sided limit along the pair axis.
double phase_gradient_norm(const DispersionRelation& rel, const PhasePair& pair, const Vec3& z);

struct QuadConfig {
    int n_slices = 12;
    int n_angular = 12;
    double root_tol = 1e-10;      // absolute tolerance on the phase residual
    double r_search_max = 0.0;    // slice-radius search cap; 0 = automatic
    double outer_skip_abs = 0.0;  // skip |f(xi1)| below this in trilinear outer sums
    double collision_skip_abs = 0.0;  // pair-contribution bound cutoff in collision sums
};

// Surface quadrature for the resonance surface: nodes z_q, plain surface
// measure weights w_q and |grad G|(z_q).  The weighted measure used by all
// collision kernels is sum w_q f(z_q) / grad_q.
struct ResonantQuadrature {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<double> grad_norms;
    bool degenerate = false;
    Vec3 rho;
    double alpha_lo = 0.0;  // axial extent in units of rho
    double alpha_hi = 0.0;
    int n_slices = 0;
    int n_angular = 0;

    // Weighted surface measure: integral over the surface of 1/|grad G|.
    double measure() const {
        double acc = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) acc += weights[i] / grad_norms[i];
        return acc;
    }
};

// Preallocated buffers so the collision kernels can rebuild quadratures in a
// tight loop without heap churn.
struct QuadWorkspace {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<double> grad_norms;
    bool degenerate = false;
    Vec3 rho;
    double alpha_lo = 0.0, alpha_hi = 0.0;

    // Cached station/angle tables, rebuilt when the node counts change.
    int trig_ns = -1, trig_na = -1;
    std::vector<double> sin_t, cos_t, sin_p, cos_p;
};

// Builds the quadrature in-place.  Throws UnverifiedDispersion if the relation
// has not passed verify_assumptions, RootNotBracketed if a slice root escapes
// the search radius.
void build_quadrature_inplace(const DispersionRelation& rel, const PhasePair& pair,
                              const QuadConfig& cfg, QuadWorkspace& ws);

ResonantQuadrature build_manifold_quadrature(const DispersionRelation& rel, const PhasePair& pair,
                                             const QuadConfig& cfg);

double manifold_integrate(const ResonantQuadrature& quad,
                          const std::function<double(const Vec3&)>& integrand);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long n = 0;
};

// Brute-force check of the surface-delta measure: Monte Carlo integral of
// integrand(z) * delta_eta(G(z)) over an automatically sized box, with
// delta_eta a normalized Gaussian of width eta.  Deterministic for a fixed
// seed independent of threading (fixed block decomposition).
McEstimate mollified_delta_integral(const DispersionRelation& rel, const PhasePair& pair,
                                    const std::function<double(const Vec3&)>& integrand,
                                    double eta, long long n_samples, unsigned long long seed);

// Radius bound: smallest R with Omega(R) >= Omega(|xi|) + Omega(|xi1|); every
// surface point satisfies |z| <= R and |xi + xi1 - z| <= R.
double surface_radius_bound(const DispersionRelation& rel, const PhasePair& pair);

}  // namespace wavekin
