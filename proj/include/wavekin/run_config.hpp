#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wavekin/dispersion.hpp"
#include "wavekin/grid_field.hpp"
#include "wavekin/manifold.hpp"

namespace wavekin {

// One initial-data descriptor.  A config carries one or more; several seeds
// form a statistical mixture and their weights must sum to 1.
struct SeedSpec {
    enum class Kind { gaussian, rayleigh_jeans, file };
    Kind kind = Kind::gaussian;
    double weight = 1.0;
    double sigma = 1.0;      // gaussian: amplitude * exp(-|xi|^2 / sigma^2)
    double amplitude = 1.0;
    double a = 1.0;          // rayleigh_jeans: a / (b + omega(xi))
    double b = 1.0;
    std::string path;        // file: WKF1 field
};

// Full experiment description, one JSON document.  Every field has a default;
// unknown keys are rejected.  All downstream-module constraints are checked by
// validate_run_config before any compute starts.
struct RunConfig {
    DispersionKind dispersion = DispersionKind::schrodinger;
    std::vector<double> dispersion_coeffs;  // per-kind length, see build_dispersion
    double verify_radius = 40.0;
    int verify_samples = 512;

    // The default experiment resolution.  A full-grid collision pass here is
    // expensive (hours on one core); configs for interactive use should set
    // smaller grids explicitly.
    GridSpec grid{33, 6.0};
    QuadConfig quad{24, 24};

    double s = 3.0;
    double gamma = 0.0;
    double eps1 = 0.5;
    double eps2 = 0.2;

    double t_final = 0.1;
    std::string method = "rk4";  // or "picard"
    int depth = 2;               // picard iteration depth
    double dt = 0.0;             // rk4 step; 0 = choose from the Lipschitz margin
    int n_out = 8;               // trajectory snapshots

    int m_max = 5;
    int duhamel_j = 2;
    bool compat_xi1 = false;

    std::vector<SeedSpec> seeds{SeedSpec{}};

    std::string output_dir = "out";
    int workers = 0;             // 0 = library/OpenMP default
    std::uint64_t rng_seed = 12345;
    double residual_tolerance = 0.0;  // >0: collision run checks sup|C| <= tol * sup gain
};

// FormatError on unreadable files or malformed JSON; ParameterOutOfRange on
// schema violations (unknown key, wrong type, failed constraint).
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text);

void validate_run_config(const RunConfig& c);

// Canonical serialization (sorted keys, every field explicit) and its FNV-1a
// hash; manifests and golden files store both.
std::string run_config_canonical(const RunConfig& c);
std::string config_hash(const RunConfig& c);

// Unverified relation from the config's kind/coefficients.
DispersionRelation build_dispersion(const RunConfig& c);
// Runs the assumption check over [0, verify_radius]; UnverifiedDispersion if
// any assumption fails.
DispersionRelation build_verified_dispersion(const RunConfig& c);

GridField build_seed_field(const SeedSpec& seed, const GridSpec& grid,
                           const DispersionRelation& rel);
// All seeds with weights, shapes checked against the config grid.
std::vector<std::pair<double, GridField>> build_seed_list(const RunConfig& c,
                                                          const DispersionRelation& rel);
// Weighted sum of the seeds as a single spectrum.
GridField build_initial_field(const RunConfig& c, const DispersionRelation& rel);

}  // namespace wavekin
