#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "wavekin/collision.hpp"
#include "wavekin/reference.hpp"

using namespace wavekin;

namespace {

double seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double max_abs_diff(const GridField& a, const GridField& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

}  // namespace

// Usage: wavekin_bench [N] [K] [n_slices] [n_angular]
// Runs the full collision operator through the fused OpenMP path and the
// serial reference path on the same Gaussian input and reports timings,
// speedup, and the worst pointwise difference.
int main(int argc, char** argv) {
    GridSpec gs;
    gs.n = argc > 1 ? std::atoi(argv[1]) : 11;
    gs.k = argc > 2 ? std::atof(argv[2]) : 5.0;
    QuadConfig cfg;
    cfg.n_slices = argc > 3 ? std::atoi(argv[3]) : 8;
    cfg.n_angular = argc > 4 ? std::atoi(argv[4]) : 8;

    auto rel = DispersionRelation::schrodinger();
    verify_assumptions(rel, 10.0 * gs.k);
    const GridField f = make_gaussian(gs, 1.5, 1.0);

    std::printf("grid N=%d K=%g, quadrature %dx%d, threads=%d\n", gs.n, gs.k, cfg.n_slices,
                cfg.n_angular, omp_get_max_threads());

    const double t0 = seconds();
    const GridField fast = collision_apply(rel, f, cfg);
    const double t1 = seconds();
    const GridField slow = reference_collision_apply(rel, f, cfg);
    const double t2 = seconds();

    const double diff = max_abs_diff(fast, slow);
    const double scale = sup_norm(fast);
    std::printf("fused openmp path : %8.3f s\n", t1 - t0);
    std::printf("serial reference  : %8.3f s\n", t2 - t1);
    std::printf("speedup           : %8.2fx\n", (t2 - t1) / (t1 - t0));
    std::printf("max |diff|        : %.3e  (relative %.3e)\n", diff,
                scale > 0 ? diff / scale : 0.0);
    return diff <= 1e-10 * std::max(1.0, scale) ? 0 : 1;
}
