#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wavekin/grid_field.hpp"

#include "json.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using wavekin::GridField;
using wavekin::read_wkf1;

namespace {

const std::string kCli = WAVEKIN_CLI_PATH;

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("wavekin_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Minimal valid configuration on a cheap grid; tests patch what they need.
json base_config() {
    json c;
    c["dispersion"] = {{"kind", "schrodinger"}, {"coeffs", json::array()}};
    c["grid"] = {{"n", 7}, {"k", 3.0}};
    c["quadrature"] = {{"n_slices", 6}, {"n_angular", 6}};
    c["norms"] = {{"s", 3.0}, {"gamma", 0.0}, {"eps1", 0.5}, {"eps2", 0.2}};
    c["time"] = {{"t_final", 0.02}, {"method", "picard"}, {"depth", 2}, {"n_out", 2}};
    c["hierarchy"] = {{"m_max", 5}, {"j", 2}};
    c["seeds"] = json::array({{{"kind", "gaussian"}, {"sigma", 0.8}, {"amplitude", 1.0}}});
    return c;
}

std::string write_config(const fs::path& dir, const json& c) {
    fs::path p = dir / "config.json";
    std::ofstream f(p);
    f << c.dump(2);
    return p.string();
}

int run_cli(const std::string& args, const fs::path& log) {
    std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

bool same_bytes(const fs::path& a, const fs::path& b) { return slurp(a) == slurp(b); }

}  // namespace

TEST_CASE("verify-dispersion reports success for the quadratic law") {
    fs::path dir = fresh_dir("verify_ok");
    std::string cfg = write_config(dir, base_config());
    int rc = run_cli("verify-dispersion --config " + cfg + " --out " + (dir / "out").string(),
                     dir / "log.txt");
    CHECK(rc == 0);
    json rep = load_json(dir / "out" / "dispersion_report.json");
    CHECK(rep["all_hold"].get<bool>());
    CHECK(rep["best_c1"].get<double>() > 0.0);
    CHECK(rep["violation"].get<std::string>().empty());
    json man = load_json(dir / "out" / "manifest.json");
    CHECK(man["command"].get<std::string>() == "verify-dispersion");
    CHECK(man["config_hash"].is_string());
}

TEST_CASE("verify-dispersion exits 1 when an assumption fails") {
    fs::path dir = fresh_dir("verify_fail");
    json c = base_config();
    c["dispersion"] = {{"kind", "low_temp_poly"}, {"coeffs", {1.0, 0.0, 0.0}}};  // constant law
    std::string cfg = write_config(dir, c);
    int rc = run_cli("verify-dispersion --config " + cfg + " --out " + (dir / "out").string(),
                     dir / "log.txt");
    CHECK(rc == 1);
    json rep = load_json(dir / "out" / "dispersion_report.json");
    CHECK_FALSE(rep["all_hold"].get<bool>());
    CHECK_FALSE(rep["violation"].get<std::string>().empty());
}

TEST_CASE("usage errors exit 2: bad json, unknown key, wrong coeff count, missing file") {
    fs::path dir = fresh_dir("usage");
    fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run_cli("collision --config " + bad.string(), dir / "l1.txt") == 2);

    json c = base_config();
    c["grdi"] = {{"n", 7}};  // typo key
    CHECK(run_cli("collision --config " + write_config(dir, c), dir / "l2.txt") == 2);

    c = base_config();
    c["dispersion"] = {{"kind", "bogoliubov"}, {"coeffs", {1.0}}};  // needs 2
    CHECK(run_cli("collision --config " + write_config(dir, c), dir / "l3.txt") == 2);

    CHECK(run_cli("collision --config " + (dir / "missing.json").string(), dir / "l4.txt") == 2);
    CHECK(run_cli("collision", dir / "l5.txt") == 2);           // --config is required
    CHECK(run_cli("frobnicate --config x", dir / "l6.txt") == 2);  // unknown subcommand
    CHECK(run_cli("--help", dir / "l7.txt") == 0);
}

TEST_CASE("collision writes the operator field plus diagnostics") {
    fs::path dir = fresh_dir("collision");
    std::string cfg = write_config(dir, base_config());
    fs::path out = dir / "out";
    int rc = run_cli("collision --config " + cfg + " --out " + out.string(), dir / "log.txt");
    CHECK(rc == 0);
    GridField c = read_wkf1((out / "collision.wkf").string());
    CHECK(c.spec().n == 7);
    CHECK(wavekin::sup_norm(c) > 0.0);
    std::string csv = slurp(out / "collision_diagnostics.csv");
    CHECK(csv.find("mass_rate,energy_rate,norm_in_s,norm_out_s,sup_c,sup_gain,residual_ratio") !=
          std::string::npos);
    json man = load_json(out / "manifest.json");
    CHECK(man["outputs"].size() >= 2);
}

TEST_CASE("collision accepts a stored input field and maps zero to zero") {
    fs::path dir = fresh_dir("collision_io");
    std::string cfg = write_config(dir, base_config());
    // Zero field in, zero field out.
    wavekin::GridSpec gs;
    gs.n = 7;
    gs.k = 3.0;
    GridField zero(gs);
    fs::path zin = dir / "zero.wkf";
    wavekin::write_wkf1(zero, zin.string());
    fs::path out = dir / "out";
    int rc = run_cli("collision --config " + cfg + " --out " + out.string() + " " + zin.string() +
                         " " + (out / "czero.wkf").string(),
                     dir / "log.txt");
    CHECK(rc == 0);
    GridField cz = read_wkf1((out / "czero.wkf").string());
    CHECK(wavekin::sup_norm(cz) == 0.0);
}

TEST_CASE("collision rejects a corrupt input field with exit 2") {
    fs::path dir = fresh_dir("collision_bad");
    std::string cfg = write_config(dir, base_config());
    fs::path bad = dir / "bad.wkf";
    std::ofstream(bad, std::ios::binary) << "XXXX garbage";
    int rc = run_cli("collision --config " + cfg + " --out " + (dir / "out").string() + " " +
                         bad.string(),
                     dir / "log.txt");
    CHECK(rc == 2);
}

TEST_CASE("collision output is bit identical across reruns and worker counts") {
    fs::path dir = fresh_dir("collision_det");
    std::string cfg = write_config(dir, base_config());
    fs::path o1 = dir / "o1", o2 = dir / "o2", o4 = dir / "o4";
    CHECK(run_cli("collision --config " + cfg + " --out " + o1.string() + " --workers 1",
                  dir / "l1.txt") == 0);
    CHECK(run_cli("collision --config " + cfg + " --out " + o2.string() + " --workers 1",
                  dir / "l2.txt") == 0);
    CHECK(run_cli("collision --config " + cfg + " --out " + o4.string() + " --workers 4",
                  dir / "l3.txt") == 0);
    CHECK(same_bytes(o1 / "collision.wkf", o2 / "collision.wkf"));
    CHECK(same_bytes(o1 / "collision.wkf", o4 / "collision.wkf"));
}

TEST_CASE("estimate-constants writes all three kinds and honors the domain") {
    fs::path dir = fresh_dir("constants");
    std::string cfg = write_config(dir, base_config());
    fs::path out = dir / "out";
    CHECK(run_cli("estimate-constants --config " + cfg + " --out " + out.string(),
                  dir / "log.txt") == 0);
    json j = load_json(out / "bound_estimate.json");
    REQUIRE(j["kinds"].size() == 3);
    for (const auto& e : j["kinds"]) {
        CHECK(e["m_est"].get<double>() > 0.0);
        CHECK(e["kind"].is_string());
    }
    CHECK(j["c_s"].get<double>() > 0.0);

    // gamma outside the lemma domain is a scientific failure, exit 1.
    json c = base_config();
    c["norms"]["gamma"] = 1.5;  // needs gamma < s - 2 = 1
    CHECK(run_cli("estimate-constants --config " + write_config(dir, c) + " --out " +
                      (dir / "out2").string(),
                  dir / "l2.txt") == 1);
}

TEST_CASE("solve records snapshots and a diagnostics table") {
    fs::path dir = fresh_dir("solve");
    std::string cfg = write_config(dir, base_config());
    fs::path out = dir / "out";
    CHECK(run_cli("solve --config " + cfg + " --out " + out.string(), dir / "log.txt") == 0);
    CHECK(fs::exists(out / "step_0000.wkf"));
    CHECK(fs::exists(out / "step_0002.wkf"));
    std::string csv = slurp(out / "diagnostics.csv");
    CHECK(csv.find("t,mass,energy,norm_s,min_value") != std::string::npos);
    // Initial snapshot equals the seed.
    GridField s0 = read_wkf1((out / "step_0000.wkf").string());
    wavekin::GridSpec gs;
    gs.n = 7;
    gs.k = 3.0;
    GridField seed = wavekin::make_gaussian(gs, 0.8, 1.0);
    for (size_t i = 0; i < seed.values().size(); ++i)
        REQUIRE(s0.values()[i] == seed.values()[i]);
}

TEST_CASE("solve with the explicit stepper is deterministic across reruns") {
    fs::path dir = fresh_dir("solve_det");
    json c = base_config();
    c["time"] = {{"t_final", 0.02}, {"method", "rk4"}, {"dt", 0.01}, {"n_out", 2}};
    std::string cfg = write_config(dir, c);
    fs::path o1 = dir / "o1", o2 = dir / "o2";
    CHECK(run_cli("solve --config " + cfg + " --out " + o1.string(), dir / "l1.txt") == 0);
    CHECK(run_cli("solve --config " + cfg + " --out " + o2.string(), dir / "l2.txt") == 0);
    CHECK(same_bytes(o1 / "step_0002.wkf", o2 / "step_0002.wkf"));
    CHECK(same_bytes(o1 / "diagnostics.csv", o2 / "diagnostics.csv"));
}

TEST_CASE("solve reports blow-up as a scientific failure with the last good state") {
    fs::path dir = fresh_dir("solve_blowup");
    json c = base_config();
    c["seeds"] = json::array({{{"kind", "gaussian"}, {"sigma", 0.8}, {"amplitude", 40.0}}});
    c["time"] = {{"t_final", 1.0}, {"method", "rk4"}, {"dt", 0.25}};
    std::string cfg = write_config(dir, c);
    fs::path out = dir / "out";
    CHECK(run_cli("solve --config " + cfg + " --out " + out.string(), dir / "log.txt") == 1);
    CHECK(fs::exists(out / "last_good.wkf"));
}

TEST_CASE("hierarchy emits a machine-checkable verdict") {
    fs::path dir = fresh_dir("hierarchy");
    std::string cfg = write_config(dir, base_config());
    fs::path out = dir / "out";
    CHECK(run_cli("hierarchy --config " + cfg + " --out " + out.string(), dir / "log.txt") == 0);
    json v = load_json(out / "hierarchy_verdict.json");
    CHECK(v["admissibility_f0"].size() == 2);  // m = 1 and m = 2
    for (const auto& row : v["admissibility_f0"]) {
        CHECK(row.get<double>() <= 1e-10);
    }
    CHECK(v["factorization_residual_t0"].get<double>() <= 1e-10);
    CHECK(v["rows"].size() >= 1);
    CHECK(v["kernel_passes"].get<int>() == 13);
    CHECK(v["balance"].contains("ok"));
}

TEST_CASE("hierarchy names the required depth when levels are missing") {
    fs::path dir = fresh_dir("hierarchy_missing");
    json c = base_config();
    c["hierarchy"] = {{"m_max", 3}, {"j", 2}};  // needs m_max >= 5
    std::string cfg = write_config(dir, c);
    int rc = run_cli("hierarchy --config " + cfg + " --out " + (dir / "out").string(),
                     dir / "log.txt");
    CHECK(rc == 1);
    std::string log = slurp(dir / "log.txt");
    CHECK(log.find("M_max") != std::string::npos);
}

TEST_CASE("legacy delta anchoring flag is accepted") {
    fs::path dir = fresh_dir("hierarchy_compat");
    std::string cfg = write_config(dir, base_config());
    fs::path out = dir / "out";
    CHECK(run_cli("hierarchy --compat-xi1 --config " + cfg + " --out " + out.string(),
                  dir / "log.txt") == 0);
    json v = load_json(out / "hierarchy_verdict.json");
    CHECK(v["compat_xi1"].get<bool>());
    // Without the flag the config default stays off.
    fs::path out2 = dir / "out2";
    CHECK(run_cli("hierarchy --config " + cfg + " --out " + out2.string(), dir / "l2.txt") == 0);
    CHECK_FALSE(load_json(out2 / "hierarchy_verdict.json")["compat_xi1"].get<bool>());
}

TEST_CASE("collision residual gate turns a stationary-residual breach into exit 1") {
    fs::path dir = fresh_dir("residual_gate");
    json c = base_config();
    c["seeds"] = json::array({{{"kind", "rayleigh_jeans"}, {"a", 1.0}, {"b", 1.0}}});
    c["residual_tolerance"] = 1e-6;  // far below the coarse-grid residual
    std::string cfg = write_config(dir, c);
    CHECK(run_cli("collision --config " + cfg + " --out " + (dir / "out").string(),
                  dir / "log.txt") == 1);
    // With a permissive tolerance the same run passes.
    c["residual_tolerance"] = 1.0;
    CHECK(run_cli("collision --config " + write_config(dir, c) + " --out " +
                      (dir / "out2").string(),
                  dir / "l2.txt") == 0);
}
