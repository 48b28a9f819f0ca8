#pragma once

#include <vector>

#include "wavekin/collision.hpp"

namespace wavekin {

// Time-integration method for the scalar kinetic equation df/dt = C[f].
struct WkeMethod {
    enum class Kind { picard, rk4 };

    Kind kind = Kind::rk4;
    int depth = 1;    // picard only
    double dt = 0.0;  // rk4 only

    static WkeMethod picard(int depth) { return {Kind::picard, depth, 0.0}; }
    static WkeMethod rk4(double dt) { return {Kind::rk4, 1, dt}; }
};

struct WkeDiagnostics {
    double time = 0.0;
    double mass = 0.0;      // integral of f
    double energy = 0.0;    // integral of omega * f
    double norm_s = 0.0;    // weighted sup norm at the configured s
    double min_value = 0.0; // positivity monitor, reported only
};

struct WkeTrajectory {
    std::vector<double> times;  // strictly increasing, starts at 0
    std::vector<GridField> states;
    std::vector<WkeDiagnostics> diagnostics;
};

// Trilinear collision form T[a,b,c]: slot a is the factor multiplying the
// pair/loss integrals at the output point (and fills the xi1 argument of the
// triple-product gain); b and c fill the two resonance arguments.  T[f,f,f]
// reproduces collision_apply bit for bit.
GridField trilinear_apply(const DispersionRelation& rel, const GridField& a, const GridField& b,
                          const GridField& c, const QuadConfig& cfg);

// Picard iterate of the mild equation f(t) = f0 + int_0^t C[f(tau)] dtau kept
// as an exact polynomial in t with grid-field coefficients: the collision
// operator is trilinear, so each iteration costs one kernel pass per ordered
// coefficient triple and integrates termwise.
struct PicardPolynomial {
    std::vector<GridField> coeffs;  // f(t) = sum_p t^p coeffs[p]

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    GridField eval(double t) const;  // Horner from the top coefficient
};

PicardPolynomial picard_polynomial(const DispersionRelation& rel, const GridField& f0, int depth,
                                   const QuadConfig& cfg);

// The depth-j iterate evaluated at time t; depth 0 returns f0 exactly.
GridField picard_iterate(const DispersionRelation& rel, const GridField& f0, double t, int depth,
                         const QuadConfig& cfg);

// Step size satisfying dt * m_est * norm0^2 <= margin, the local Lipschitz
// heuristic used when no explicit dt is configured.
double suggested_dt(double m_est, double norm0, double margin = 0.1);

// Advances f0 to t_final.  rk4 records every step; picard evaluates the
// depth-j polynomial at n_out equal intervals (n_out <= 0 picks 8).  Throws
// StepRejected when any recorded state's weighted norm exceeds 4x the initial
// norm.
WkeTrajectory solve_wke(const DispersionRelation& rel, const GridField& f0, double t_final,
                        const WkeMethod& method, const QuadConfig& cfg, double s = 3.0,
                        int n_out = 0);

}  // namespace wavekin
