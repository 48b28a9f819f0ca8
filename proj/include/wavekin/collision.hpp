#pragma once

#include <vector>

#include "wavekin/dispersion.hpp"
#include "wavekin/grid_field.hpp"
#include "wavekin/manifold.hpp"

namespace wavekin {

// Trilinear kernels of the 4-wave interaction, evaluated at a single output
// point xi.  The outer integral runs over the grid of the input fields by the
// trapezoid rule; the inner integral is the weighted surface quadrature over
// the resonance surface of (xi, xi1), with rho = xi + xi1.
//
//   c1_apply : integral over xi1 of f(xi1) * [surface integral of g(z) h(rho-z)]
//   q2_apply : integral over xi1 of          [surface integral of g(z) h(rho-z)]
//   q3_apply : integral over xi1 of g(xi1) * [surface integral of h(z)],
//              or of h(rho-z) when reflected is set
//
// All fields must share one GridSpec.
double c1_apply(const DispersionRelation& rel, const GridField& f, const GridField& g,
                const GridField& h, const Vec3& xi, const QuadConfig& cfg);

double q2_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                const Vec3& xi, const QuadConfig& cfg);

double q3_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                const Vec3& xi, const QuadConfig& cfg, bool reflected = false);

// The four monomials of the collision integrand at one point, sharing a single
// quadrature sweep:
//   gain_tri  = c1[f,f,f]                 (gain, trilinear in the outer slot)
//   gain_pair = f(xi) * q2[f,f]           (gain)
//   loss_z    = f(xi) * q3[f,f]           (loss, surviving factor at z)
//   loss_r    = f(xi) * q3[f,f] reflected (loss, surviving factor at rho-z)
struct CollisionTerms {
    double gain_tri = 0.0;
    double gain_pair = 0.0;
    double loss_z = 0.0;
    double loss_r = 0.0;

    double value() const { return gain_tri + gain_pair - loss_z - loss_r; }
    double gain() const { return gain_tri + gain_pair; }
};

CollisionTerms collision_terms(const DispersionRelation& rel, const GridField& f, const Vec3& xi,
                               const QuadConfig& cfg, QuadWorkspace& ws);

double collision_point(const DispersionRelation& rel, const GridField& f, const Vec3& xi,
                       const QuadConfig& cfg);
double gain_point(const DispersionRelation& rel, const GridField& f, const Vec3& xi,
                  const QuadConfig& cfg);

// Full collision operator on every grid point.  Parallel over output points;
// the summation order within a point is fixed, so the result is bit-stable
// for any worker count.
GridField collision_apply(const DispersionRelation& rel, const GridField& f,
                          const QuadConfig& cfg);

// All four kernels attached to an ordered factor triple (a, b, c), evaluated
// on every grid point in one fused sweep:
//   k1 = c1[a,b,c]
//   m2 = q2[b,c]
//   m3 = q3[b,c] reflected  (outer b, surviving factor at rho-z)
//   m4 = q3[b,c]            (outer b, surviving factor at z)
// The hierarchy operators consume exactly these combinations.
struct KernelFields {
    GridField k1, m2, m3, m4;
};

KernelFields kernel_fields(const DispersionRelation& rel, const GridField& a, const GridField& b,
                           const GridField& c, const QuadConfig& cfg);

// Boundedness-constant estimation.  Each kind integrates a specific bracket
// weight over xi1 and the resonance surface and takes the max over a probe
// set of output points:
//   lemma_C1: <xi>^g <xi1>^-s <z>^-s
//   lemma_C2: <xi>^g <z>^-s <rho-z>^-s
//   lemma_C3: <xi>^g <xi1>^-s <z>^-s
enum class BoundKind { lemma_C1, lemma_C2, lemma_C3 };

std::string to_string(BoundKind k);
BoundKind bound_kind_from_string(const std::string& s);

struct BoundEstimate {
    BoundKind kind = BoundKind::lemma_C1;
    double s = 0.0;
    double gamma = 0.0;
    double m_est = 0.0;   // max of the sampled double integral
    Vec3 argmax_xi;       // probe attaining the max
};

struct ConstantSearchConfig {
    GridSpec grid;               // xi1 lattice and box truncation
    QuadConfig quad;
    std::vector<Vec3> probes;    // empty -> default_probe_set(grid.k)
};

// Deterministic probe set: origin, axis and diagonal rays up to 2K.  The
// large-radius entries sample the decay of the bound integrand outside the
// box.
std::vector<Vec3> default_probe_set(double k_box);

// The double integral of the kind's weight at one output point.
double bound_integrand_at(const DispersionRelation& rel, double s, double gamma, BoundKind kind,
                          const Vec3& xi, const GridSpec& grid, const QuadConfig& quad);

// Requires s > 2 and 0 <= gamma < s-2 (and gamma < 1 for lemma_C1), else
// ParameterOutOfRange.
BoundEstimate estimate_bound_constant(const DispersionRelation& rel, double s, double gamma,
                                      BoundKind kind, const ConstantSearchConfig& cfg);

// Checks sup over probes of <xi>^(s+gamma) |C_i[f,g,h](xi)| against
// M_est * ||f|| ||g|| ||h|| in the weighted sup norms, for each trial triple.
struct TrialTriple {
    const GridField* f;
    const GridField* g;
    const GridField* h;
};

struct NormCheckReport {
    double max_ratio = 0.0;  // observed / bound, max over triples and probes
    Vec3 argmax_xi;
    int n_triples = 0;
    double m_est = 0.0;
};

NormCheckReport operator_norm_check(const DispersionRelation& rel, BoundKind kind, double s,
                                    double gamma, const std::vector<TrialTriple>& trials,
                                    const ConstantSearchConfig& cfg);

}  // namespace wavekin
