#pragma once

#include "wavekin/collision.hpp"

namespace wavekin {

// Naive serial counterparts of the collision kernels, structured for
// readability: every surface integral goes through build_manifold_quadrature
// and manifold_integrate with fresh allocations, and nothing is fused or
// parallelized.  Tests and the benchmark compare the fast path against these.
double reference_c1_apply(const DispersionRelation& rel, const GridField& f, const GridField& g,
                          const GridField& h, const Vec3& xi, const QuadConfig& cfg);

double reference_q2_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                          const Vec3& xi, const QuadConfig& cfg);

double reference_q3_apply(const DispersionRelation& rel, const GridField& g, const GridField& h,
                          const Vec3& xi, const QuadConfig& cfg, bool reflected = false);

GridField reference_collision_apply(const DispersionRelation& rel, const GridField& f,
                                    const QuadConfig& cfg);

}  // namespace wavekin
