#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavekin/collision.hpp"
#include "wavekin/run_config.hpp"

using nlohmann::json;
using namespace wavekin;

namespace {

// Monte-Carlo estimate of C[f](xi) that never touches the surface-quadrature
// code: outer trapezoid sum over grid pairs, inner mollified-delta integral
// over the box.  The coincident pair xi1 == xi is skipped: its resonance set
// degenerates to a single point, which carries zero surface measure, while
// the mollified integrand diverges like eta^(-1/4) there.  Pairs with
// f(xi1) < 1e-9 are skipped: on the resonance set f(z) f(rho-z) equals
// f(xi) f(xi1) for the squared-modulus law, so every monomial scales with
// f(xi1).
McEstimate oracle_collision_point(const DispersionRelation& rel, const GridField& f,
                                  const Vec3& xi, double eta, long long n_per_pair,
                                  unsigned long long seed) {
    const GridSpec gs = f.spec();
    const int n = gs.n;
    const double h = gs.h();
    const double fxi = f(xi);
    double acc = 0.0, var = 0.0;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            for (int iz = 0; iz < n; ++iz) {
                const double w = trapezoid_weight(gs, ix, iy, iz);
                const Vec3 xi1{-gs.k + ix * h, -gs.k + iy * h, -gs.k + iz * h};
                if (norm(xi1 - xi) < 1e-12) continue;
                const double f1 = f(xi1);
                if (f1 < 1e-9) continue;
                const Vec3 rho = xi + xi1;
                const auto integrand = [&](const Vec3& z) {
                    const double fz = f(z);
                    const double fr = f(rho - z);
                    return fz * fr * (f1 + fxi) - fxi * f1 * (fz + fr);
                };
                const unsigned long long pair_seed =
                    seed + 7ULL * static_cast<unsigned long long>((ix * n + iy) * n + iz);
                const McEstimate est =
                    mollified_delta_integral(rel, {xi, xi1}, integrand, eta, n_per_pair, pair_seed);
                acc += w * est.value;
                var += w * w * est.std_error * est.std_error;
            }
        }
    }
    McEstimate out;
    out.value = acc;
    out.std_error = std::sqrt(var);
    out.n = n_per_pair;
    return out;
}

RunConfig golden_config() {
    RunConfig rc;
    rc.grid = GridSpec{9, 4.0};
    rc.quad = QuadConfig{8, 8};
    rc.seeds = {SeedSpec{}};  // gaussian sigma 1, amplitude 1
    return rc;
}

}  // namespace

// Regenerates the stored reference values.  Usage: wavekin_golden_gen [outdir]
// (default tests/golden).  The probe oracle takes a few minutes; results are
// deterministic for the fixed seed.
int main(int argc, char** argv) {
    const std::filesystem::path out = argc > 1 ? argv[1] : "tests/golden";
    std::filesystem::create_directories(out);

    const RunConfig rc = golden_config();
    DispersionRelation rel = build_verified_dispersion(rc);
    const GridField f = build_initial_field(rc, rel);

    const double eta = 0.02;
    const long long n_per_pair = 150000;
    const unsigned long long seed = 91;
    const std::vector<Vec3> probes = {
        {0.0, 0.0, 0.0}, {0.5, 0.25, 0.0}, {1.0, 0.0, 0.0}, {-0.5, 1.0, 0.5}, {1.0, 1.0, 0.0}};

    json probe_rows = json::array();
    for (const Vec3& p : probes) {
        const McEstimate est = oracle_collision_point(rel, f, p, eta, n_per_pair, seed);
        probe_rows.push_back(json{{"xi", {p.x, p.y, p.z}},
                                  {"value", est.value},
                                  {"std_error", est.std_error}});
        std::printf("probe (%5.2f,%5.2f,%5.2f): C = %+.6f +- %.6f\n", p.x, p.y, p.z, est.value,
                    est.std_error);
        std::fflush(stdout);
    }

    json probes_doc;
    probes_doc["config_hash"] = config_hash(rc);
    probes_doc["config"] = json::parse(run_config_canonical(rc));
    probes_doc["eta"] = eta;
    probes_doc["n_per_pair"] = n_per_pair;
    probes_doc["rng_seed"] = seed;
    probes_doc["probes"] = probe_rows;
    {
        std::ofstream os(out / "collision_probes.json", std::ios::binary);
        os << probes_doc.dump(2) << "\n";
    }

    // First-run capture of the full operator for bit-level regression.
    const GridField cf = collision_apply(rel, f, rc.quad);
    write_wkf1(cf, (out / "collision_field.wkf").string());
    json field_doc;
    field_doc["config_hash"] = config_hash(rc);
    field_doc["config"] = json::parse(run_config_canonical(rc));
    field_doc["field"] = "collision_field.wkf";
    field_doc["sup_norm"] = sup_norm(cf);
    field_doc["mass_rate"] = trapezoid_integral(cf);
    {
        std::ofstream os(out / "collision_field.json", std::ios::binary);
        os << field_doc.dump(2) << "\n";
    }
    std::printf("field golden: sup %.9g mass rate %.9g\n", sup_norm(cf), trapezoid_integral(cf));
    return 0;
}
