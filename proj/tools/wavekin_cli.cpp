#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavekin/bounds.hpp"
#include "wavekin/collision.hpp"
#include "wavekin/errors.hpp"
#include "wavekin/hierarchy.hpp"
#include "wavekin/run_config.hpp"
#include "wavekin/wke.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavekin;

namespace {

struct Invocation {
    std::string command;
    RunConfig config;
    fs::path out;
    std::vector<std::string> outputs;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot write " + path.string());
    f << text;
}

void write_json_file(Invocation& inv, const std::string& name, const json& doc) {
    write_text(inv.out / name, doc.dump(2) + "\n");
    inv.outputs.push_back(name);
}

void write_manifest(Invocation& inv) {
    json m;
    m["command"] = inv.command;
    m["config_hash"] = config_hash(inv.config);
    m["config"] = json::parse(run_config_canonical(inv.config));
    m["outputs"] = inv.outputs;
    write_text(inv.out / "manifest.json", m.dump(2) + "\n");
}

Invocation make_invocation(const std::string& command, const std::string& config_path,
                           const std::string& out_override, int workers_flag) {
    Invocation inv;
    inv.command = command;
    inv.config = load_run_config(config_path);
    inv.out = out_override.empty() ? fs::path(inv.config.output_dir) : fs::path(out_override);
    std::error_code ec;
    fs::create_directories(inv.out, ec);
    if (ec) throw FormatError("cannot create output directory " + inv.out.string());
    const int workers = workers_flag > 0 ? workers_flag : inv.config.workers;
    if (workers > 0) omp_set_num_threads(workers);
    return inv;
}

WkeDiagnostics field_diagnostics(const DispersionRelation& rel, const GridField& f, double t,
                                 double s) {
    WkeDiagnostics d;
    d.time = t;
    d.mass = trapezoid_integral(f);
    d.energy = trapezoid_integral(f, [&](const Vec3& p) { return rel.omega(p); });
    d.norm_s = weighted_field_norm(f, s);
    d.min_value = *std::min_element(f.values().begin(), f.values().end());
    return d;
}

std::string csv_row(const WkeDiagnostics& d) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", d.time, d.mass, d.energy,
                  d.norm_s, d.min_value);
    return buf;
}

int run_verify_dispersion(Invocation& inv) {
    DispersionRelation rel = build_dispersion(inv.config);
    const AssumptionReport rep =
        verify_assumptions(rel, inv.config.verify_radius, inv.config.verify_samples);
    json j;
    j["kind"] = to_string(rel.kind());
    j["coeffs"] = inv.config.dispersion_coeffs;
    j["r_max"] = rep.r_max;
    j["n_samples"] = rep.n_samples;
    j["smooth_nonneg"] = rep.smooth_nonneg;
    j["growth_holds"] = rep.growth_holds;
    j["doubling_holds"] = rep.doubling_holds;
    j["best_c1"] = rep.best_c1;
    j["best_c2"] = rep.best_c2;
    j["worst_x_growth"] = rep.worst_x_growth;
    j["worst_x_doubling"] = rep.worst_x_doubling;
    j["violation"] = rep.violation;
    j["all_hold"] = rep.all_hold();
    write_json_file(inv, "dispersion_report.json", j);
    write_manifest(inv);
    std::printf("verify-dispersion %s: %s\n", to_string(rel.kind()).c_str(),
                rep.all_hold() ? "all assumptions hold" : ("violated: " + rep.violation).c_str());
    return rep.all_hold() ? 0 : 1;
}

int run_collision(Invocation& inv, const std::string& field_in, const std::string& field_out) {
    const RunConfig& c = inv.config;
    DispersionRelation rel = build_verified_dispersion(c);
    const GridField f = field_in.empty() ? build_initial_field(c, rel) : read_wkf1(field_in);
    const GridSpec gs = f.spec();

    GridField cf(gs), gain(gs);
    const int n = gs.n;
#pragma omp parallel
    {
        QuadWorkspace ws;
#pragma omp for collapse(2) schedule(dynamic)
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                for (int iz = 0; iz < n; ++iz) {
                    const CollisionTerms t = collision_terms(rel, f, f.point(ix, iy, iz), c.quad, ws);
                    cf.at(ix, iy, iz) = t.value();
                    gain.at(ix, iy, iz) = t.gain();
                }
    }

    const std::string out_name = field_out.empty() ? (inv.out / "collision.wkf").string() : field_out;
    write_wkf1(cf, out_name);
    inv.outputs.push_back(out_name);

    const double mass_rate = trapezoid_integral(cf);
    const double energy_rate = trapezoid_integral(cf, [&](const Vec3& p) { return rel.omega(p); });
    const double norm_in = weighted_field_norm(f, c.s);
    const double norm_out = weighted_field_norm(cf, c.s);
    const double sup_c = sup_norm(cf);
    const double sup_gain = sup_norm(gain);
    const double ratio = sup_gain > 0.0 ? sup_c / sup_gain : 0.0;

    char row[400];
    std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", mass_rate,
                  energy_rate, norm_in, norm_out, sup_c, sup_gain, ratio);
    write_text(inv.out / "collision_diagnostics.csv",
               std::string("mass_rate,energy_rate,norm_in_s,norm_out_s,sup_c,sup_gain,residual_ratio\n") +
                   row);
    inv.outputs.push_back("collision_diagnostics.csv");
    write_manifest(inv);

    std::printf("collision: mass_rate=%.6g energy_rate=%.6g residual_ratio=%.6g\n", mass_rate,
                energy_rate, ratio);
    if (c.residual_tolerance > 0.0 && ratio > c.residual_tolerance) {
        std::fprintf(stderr, "collision residual %.6g exceeds tolerance %.6g\n", ratio,
                     c.residual_tolerance);
        return 1;
    }
    return 0;
}

int run_estimate_constants(Invocation& inv) {
    const RunConfig& c = inv.config;
    DispersionRelation rel = build_verified_dispersion(c);
    ConstantSearchConfig sc;
    sc.grid = c.grid;
    sc.quad = c.quad;

    json kinds = json::array();
    double c_s = 0.0;
    try {
        for (BoundKind kind : {BoundKind::lemma_C1, BoundKind::lemma_C2, BoundKind::lemma_C3}) {
            const BoundEstimate e = estimate_bound_constant(rel, c.s, c.gamma, kind, sc);
            kinds.push_back(json{{"kind", to_string(kind)},
                                 {"m_est", e.m_est},
                                 {"argmax_xi", {e.argmax_xi.x, e.argmax_xi.y, e.argmax_xi.z}}});
            c_s = std::max(c_s, 4.0 * e.m_est);
        }
    } catch (const ParameterOutOfRange& e) {
        // Bound parameters outside the estimate's validity region are a
        // scientific failure for this command, not a usage error.
        std::fprintf(stderr, "estimate-constants: %s\n", e.what());
        return 1;
    }

    json j;
    j["s"] = c.s;
    j["gamma"] = c.gamma;
    j["grid"] = {{"n", c.grid.n}, {"k", c.grid.k}};
    j["quadrature"] = {{"n_slices", c.quad.n_slices}, {"n_angular", c.quad.n_angular}};
    j["kinds"] = kinds;
    j["c_s"] = c_s;
    j["eps1"] = c.eps1;
    j["eps2"] = c.eps2;
    write_json_file(inv, "bound_estimate.json", j);
    write_manifest(inv);
    std::printf("estimate-constants: C_s = %.6g (s=%g, gamma=%g)\n", c_s, c.s, c.gamma);
    return 0;
}

int run_solve(Invocation& inv) {
    const RunConfig& c = inv.config;
    DispersionRelation rel = build_verified_dispersion(c);
    const GridField f0 = build_initial_field(c, rel);
    const int n_seg = std::max(1, c.n_out);

    std::vector<WkeDiagnostics> diags;
    diags.push_back(field_diagnostics(rel, f0, 0.0, c.s));
    GridField last_good = f0;
    bool rejected = false;
    std::string reject_reason;

    auto save_step = [&](int idx, const GridField& g) {
        char name[64];
        std::snprintf(name, sizeof name, "step_%04d.wkf", idx);
        write_wkf1(g, (inv.out / name).string());
        inv.outputs.push_back(name);
    };
    save_step(0, f0);

    if (c.method == "picard") {
        const PicardPolynomial poly = picard_polynomial(rel, f0, c.depth, c.quad);
        const double norm_limit = 4.0 * weighted_field_norm(f0, c.s);
        for (int i = 1; i <= n_seg; ++i) {
            const double t = c.t_final * i / n_seg;
            GridField g = poly.eval(t);
            WkeDiagnostics d = field_diagnostics(rel, g, t, c.s);
            if (d.norm_s > norm_limit) {
                rejected = true;
                reject_reason = "picard iterate norm exceeded 4x the initial norm";
                break;
            }
            diags.push_back(d);
            last_good = std::move(g);
            save_step(i, last_good);
        }
    } else {
        double dt = c.dt;
        if (dt <= 0.0) {
            ConstantSearchConfig sc;
            sc.grid = c.grid;
            sc.quad = c.quad;
            double m_est = 0.0;
            for (BoundKind kind : {BoundKind::lemma_C1, BoundKind::lemma_C2, BoundKind::lemma_C3})
                m_est = std::max(m_est, 4.0 * estimate_bound_constant(rel, c.s, 0.0, kind, sc).m_est);
            dt = std::min(suggested_dt(m_est, weighted_field_norm(f0, c.s)), c.t_final / n_seg);
        }
        for (int i = 1; i <= n_seg; ++i) {
            const double t0 = c.t_final * (i - 1) / n_seg;
            const double t1 = c.t_final * i / n_seg;
            try {
                WkeTrajectory seg =
                    solve_wke(rel, last_good, t1 - t0, WkeMethod::rk4(dt), c.quad, c.s, 0);
                last_good = seg.states.back();
            } catch (const StepRejected& e) {
                rejected = true;
                reject_reason = e.what();
                break;
            }
            diags.push_back(field_diagnostics(rel, last_good, t1, c.s));
            save_step(i, last_good);
        }
    }

    std::string csv = "t,mass,energy,norm_s,min_value\n";
    for (const WkeDiagnostics& d : diags) csv += csv_row(d);
    write_text(inv.out / "diagnostics.csv", csv);
    inv.outputs.push_back("diagnostics.csv");

    if (rejected) {
        write_wkf1(last_good, (inv.out / "last_good.wkf").string());
        inv.outputs.push_back("last_good.wkf");
    }
    write_manifest(inv);

    const WkeDiagnostics& dl = diags.back();
    std::printf("solve: reached t=%.6g mass=%.9g energy=%.9g norm_s=%.6g%s\n", dl.time, dl.mass,
                dl.energy, dl.norm_s, rejected ? " (step rejected, last good state saved)" : "");
    if (rejected) {
        std::fprintf(stderr, "solve: %s\n", reject_reason.c_str());
        return 1;
    }
    return 0;
}

int run_hierarchy(Invocation& inv, bool compat_flag) {
    const RunConfig& c = inv.config;
    const bool compat = compat_flag || c.compat_xi1;
    DispersionRelation rel = build_verified_dispersion(c);
    auto seeds = build_seed_list(c, rel);

    HierarchyState f0 = seeds.size() == 1 ? make_factorized(seeds[0].second, c.m_max)
                                          : make_mixture(seeds, c.m_max);
    DuhamelExpansion du(rel, f0, c.quad, compat);
    const double mass0 = trapezoid_integral(build_initial_field(c, rel));

    json rows = json::array();
    const int n_seg = std::max(1, c.n_out);
    for (int i = 0; i <= n_seg; ++i) {
        const double t = c.t_final * i / n_seg;
        HierarchyState st = du.evaluate(t, c.duhamel_j);
        const HierarchyNorm hn = hierarchy_norm(st, c.s, c.eps2, NormMode::triangle_bound);
        json row;
        row["t"] = t;
        row["norm_eps2"] = hn.value;
        row["norm_tail"] = hn.tail_bound;
        row["rank_level1"] = st.at_level(1).rank();
        rows.push_back(row);
    }

    json adm = json::array();
    for (int m = 1; m <= 2 && m + 1 <= f0.m_max; ++m)
        adm.push_back(admissibility_residual(f0, m, mass0));

    json verdict;
    verdict["compat_xi1"] = compat;
    verdict["j"] = c.duhamel_j;
    verdict["m_max"] = c.m_max;
    verdict["kernel_passes"] = du.cache().passes();
    verdict["admissibility_f0"] = adm;
    verdict["rows"] = rows;

    // Factorization residual of the final iterate against the matching
    // single-mode solve (factorized states only).
    if (seeds.size() == 1) {
        const GridField& sf = seeds[0].second;
        WkeTrajectory base;
        base.times.push_back(0.0);
        base.states.push_back(sf);
        base.diagnostics.push_back(field_diagnostics(rel, sf, 0.0, c.s));
        HierarchyState st0 = du.evaluate(0.0, c.duhamel_j);
        verdict["factorization_residual_t0"] = factorization_residual(st0, base, 1, c.s, 200);

        const WkeMethod method = c.method == "picard" ? WkeMethod::picard(c.depth)
                                                      : WkeMethod::rk4(c.dt > 0 ? c.dt : c.t_final / 16);
        WkeTrajectory traj = solve_wke(rel, sf, c.t_final, method, c.quad, c.s, 4);
        HierarchyState st = du.evaluate(c.t_final, c.duhamel_j);
        const int m_top = std::min(2, st.m_max);
        json fres = json::array();
        for (int m = 1; m <= m_top; ++m)
            fres.push_back(factorization_residual(st, traj, m, c.s, 200));
        verdict["factorization_residual_T"] = fres;
    }

    // Balance verdict with the constant estimated at this config's quadrature.
    {
        ConstantSearchConfig sc;
        sc.grid = c.grid;
        sc.quad = c.quad;
        double c_s = 0.0;
        for (BoundKind kind : {BoundKind::lemma_C1, BoundKind::lemma_C2, BoundKind::lemma_C3})
            c_s = std::max(c_s, 4.0 * estimate_bound_constant(rel, c.s, 0.0, kind, sc).m_est);
        SeriesParams sp;
        sp.s = c.s;
        sp.eps1 = c.eps1;
        sp.eps2 = c.eps2;
        sp.t_horizon = c.t_final;
        sp.c_s = c_s;
        sp.norm_f0 = hierarchy_norm(f0, c.s, c.eps1, NormMode::triangle_bound).value;
        const BalanceReport br = check_balance(sp);
        verdict["balance"] = {{"c_s", c_s},
                              {"ok", br.ok},
                              {"ratio_product", br.ratio_product},
                              {"time_product", br.time_product}};
        verdict["series_tail_bound"] = br.ok ? json(series_tail_bound(sp)) : json();
    }

    write_json_file(inv, "hierarchy_verdict.json", verdict);
    write_manifest(inv);
    std::printf("hierarchy: j=%d m_max=%d passes=%zu final norm=%.9g\n", c.duhamel_j, c.m_max,
                du.cache().passes(), rows.back()["norm_eps2"].get<double>());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wave-kinetic collision, solver, and hierarchy toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, field_in, field_out;
    int workers = 0;
    bool compat = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (default: config output_dir)");
        sub->add_option("--workers", workers, "OpenMP worker count (0 = default)");
    };

    CLI::App* vd = app.add_subcommand("verify-dispersion", "check the dispersion-law assumptions");
    add_common(vd);
    CLI::App* co = app.add_subcommand("collision", "apply the collision operator to a field");
    add_common(co);
    co->add_option("field_in", field_in, "input WKF1 field (default: config seeds)");
    co->add_option("field_out", field_out, "output WKF1 field (default: <out>/collision.wkf)");
    CLI::App* ec = app.add_subcommand("estimate-constants", "estimate the boundedness constants");
    add_common(ec);
    CLI::App* so = app.add_subcommand("solve", "integrate the kinetic equation");
    add_common(so);
    CLI::App* hi = app.add_subcommand("hierarchy", "evaluate Duhamel iterates and residuals");
    add_common(hi);
    hi->add_flag("--compat-xi1", compat, "pin the level-coupling deltas to xi_1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (vd->parsed()) {
            Invocation inv = make_invocation("verify-dispersion", config_path, out_dir, workers);
            return run_verify_dispersion(inv);
        }
        if (co->parsed()) {
            Invocation inv = make_invocation("collision", config_path, out_dir, workers);
            return run_collision(inv, field_in, field_out);
        }
        if (ec->parsed()) {
            Invocation inv = make_invocation("estimate-constants", config_path, out_dir, workers);
            return run_estimate_constants(inv);
        }
        if (so->parsed()) {
            Invocation inv = make_invocation("solve", config_path, out_dir, workers);
            return run_solve(inv);
        }
        if (hi->parsed()) {
            Invocation inv = make_invocation("hierarchy", config_path, out_dir, workers);
            try {
                return run_hierarchy(inv, compat);
            } catch (const MissingLevel& e) {
                // Truncation too shallow for the requested iterate: report the
                // required depth as a failed check, not a usage error.
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ScientificError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
