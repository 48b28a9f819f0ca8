#include "wavekin/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wavekin/errors.hpp"

namespace wavekin {

namespace {

using nlohmann::json;

void fail_schema(const std::string& what) { throw ParameterOutOfRange("config: " + what); }

// Rejects unknown keys so typos cannot silently fall back to defaults.
void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail_schema(where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) fail_schema(where + ": unknown key '" + it.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) fail_schema(where + "." + key + " must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key, int dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail_schema(where + "." + key + " must be an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail_schema(where + "." + key + " must be a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) fail_schema(where + "." + key + " must be a string");
    return v.get<std::string>();
}

SeedSpec parse_seed(const json& obj, const std::string& where) {
    check_keys(obj, where, {"kind", "weight", "sigma", "amplitude", "a", "b", "path"});
    SeedSpec s;
    const std::string kind = get_string(obj, where, "kind", "gaussian");
    if (kind == "gaussian") s.kind = SeedSpec::Kind::gaussian;
    else if (kind == "rayleigh_jeans") s.kind = SeedSpec::Kind::rayleigh_jeans;
    else if (kind == "file") s.kind = SeedSpec::Kind::file;
    else fail_schema(where + ".kind must be gaussian, rayleigh_jeans, or file");
    s.weight = get_number(obj, where, "weight", 1.0);
    s.sigma = get_number(obj, where, "sigma", 1.0);
    s.amplitude = get_number(obj, where, "amplitude", 1.0);
    s.a = get_number(obj, where, "a", 1.0);
    s.b = get_number(obj, where, "b", 1.0);
    s.path = get_string(obj, where, "path", "");
    return s;
}

RunConfig parse_document(const json& doc) {
    check_keys(doc, "config",
               {"dispersion", "grid", "quadrature", "norms", "time", "hierarchy", "seeds",
                "output_dir", "workers", "rng_seed", "residual_tolerance"});
    RunConfig c;

    if (doc.contains("dispersion")) {
        const json& d = doc.at("dispersion");
        check_keys(d, "dispersion", {"kind", "coeffs", "verify_radius", "verify_samples"});
        const std::string kind = get_string(d, "dispersion", "kind", "schrodinger");
        try {
            c.dispersion = dispersion_kind_from_string(kind);
        } catch (const ParameterOutOfRange&) {
            fail_schema("dispersion.kind '" + kind + "' is not a known law");
        }
        if (d.contains("coeffs")) {
            const json& a = d.at("coeffs");
            if (!a.is_array()) fail_schema("dispersion.coeffs must be an array");
            for (const auto& v : a) {
                if (!v.is_number()) fail_schema("dispersion.coeffs entries must be numbers");
                c.dispersion_coeffs.push_back(v.get<double>());
            }
        }
        c.verify_radius = get_number(d, "dispersion", "verify_radius", c.verify_radius);
        c.verify_samples = get_int(d, "dispersion", "verify_samples", c.verify_samples);
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        check_keys(g, "grid", {"n", "k"});
        c.grid.n = get_int(g, "grid", "n", c.grid.n);
        c.grid.k = get_number(g, "grid", "k", c.grid.k);
    }

    if (doc.contains("quadrature")) {
        const json& q = doc.at("quadrature");
        check_keys(q, "quadrature", {"n_slices", "n_angular", "root_tol"});
        c.quad.n_slices = get_int(q, "quadrature", "n_slices", c.quad.n_slices);
        c.quad.n_angular = get_int(q, "quadrature", "n_angular", c.quad.n_angular);
        c.quad.root_tol = get_number(q, "quadrature", "root_tol", c.quad.root_tol);
    }

    if (doc.contains("norms")) {
        const json& n = doc.at("norms");
        check_keys(n, "norms", {"s", "gamma", "eps1", "eps2"});
        c.s = get_number(n, "norms", "s", c.s);
        c.gamma = get_number(n, "norms", "gamma", c.gamma);
        c.eps1 = get_number(n, "norms", "eps1", c.eps1);
        c.eps2 = get_number(n, "norms", "eps2", c.eps2);
    }

    if (doc.contains("time")) {
        const json& t = doc.at("time");
        check_keys(t, "time", {"t_final", "method", "depth", "dt", "n_out"});
        c.t_final = get_number(t, "time", "t_final", c.t_final);
        c.method = get_string(t, "time", "method", c.method);
        c.depth = get_int(t, "time", "depth", c.depth);
        c.dt = get_number(t, "time", "dt", c.dt);
        c.n_out = get_int(t, "time", "n_out", c.n_out);
    }

    if (doc.contains("hierarchy")) {
        const json& h = doc.at("hierarchy");
        check_keys(h, "hierarchy", {"m_max", "j", "compat_xi1"});
        c.m_max = get_int(h, "hierarchy", "m_max", c.m_max);
        c.duhamel_j = get_int(h, "hierarchy", "j", c.duhamel_j);
        c.compat_xi1 = get_bool(h, "hierarchy", "compat_xi1", c.compat_xi1);
    }

    if (doc.contains("seeds")) {
        const json& s = doc.at("seeds");
        if (!s.is_array() || s.empty()) fail_schema("seeds must be a non-empty array");
        c.seeds.clear();
        for (size_t i = 0; i < s.size(); ++i) {
            c.seeds.push_back(parse_seed(s[i], "seeds[" + std::to_string(i) + "]"));
        }
    }

    c.output_dir = get_string(doc, "config", "output_dir", c.output_dir);
    c.workers = get_int(doc, "config", "workers", c.workers);
    if (doc.contains("rng_seed")) {
        const json& v = doc.at("rng_seed");
        if (!v.is_number_unsigned() && !v.is_number_integer())
            fail_schema("rng_seed must be a nonnegative integer");
        if (v.is_number_integer() && v.get<long long>() < 0)
            fail_schema("rng_seed must be a nonnegative integer");
        c.rng_seed = v.get<std::uint64_t>();
    }
    c.residual_tolerance = get_number(doc, "config", "residual_tolerance", c.residual_tolerance);

    validate_run_config(c);
    return c;
}

int expected_coeffs(DispersionKind k) {
    switch (k) {
        case DispersionKind::schrodinger: return 0;
        case DispersionKind::bogoliubov: return 2;
        case DispersionKind::bohm_pines: return 3;
        case DispersionKind::low_temp_poly: return 3;
    }
    return 0;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_document(doc);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config_text(buf.str());
}

void validate_run_config(const RunConfig& c) {
    const int want = expected_coeffs(c.dispersion);
    if (!c.dispersion_coeffs.empty() && static_cast<int>(c.dispersion_coeffs.size()) != want)
        fail_schema("dispersion.coeffs needs " + std::to_string(want) + " entries for " +
                    to_string(c.dispersion));
    for (double v : c.dispersion_coeffs)
        if (!(v >= 0.0)) fail_schema("dispersion coefficients must be nonnegative");
    if (!(c.verify_radius > 0.0)) fail_schema("dispersion.verify_radius must be positive");
    if (c.verify_samples < 8) fail_schema("dispersion.verify_samples must be at least 8");

    if (c.grid.n < 2) fail_schema("grid.n must be at least 2");
    if (!(c.grid.k > 0.0)) fail_schema("grid.k must be positive");
    if (c.quad.n_slices < 2) fail_schema("quadrature.n_slices must be at least 2");
    if (c.quad.n_angular < 2) fail_schema("quadrature.n_angular must be at least 2");
    if (!(c.quad.root_tol > 0.0)) fail_schema("quadrature.root_tol must be positive");

    if (!(c.s > 2.0)) fail_schema("norms.s must exceed 2");
    if (!(c.gamma >= 0.0)) fail_schema("norms.gamma must be nonnegative");
    if (!(c.eps1 > 0.0 && c.eps1 < 1.0)) fail_schema("norms.eps1 must lie in (0,1)");
    if (!(c.eps2 > 0.0 && c.eps2 < c.eps1)) fail_schema("norms.eps2 must lie in (0, eps1)");

    if (!(c.t_final > 0.0)) fail_schema("time.t_final must be positive");
    if (c.method != "rk4" && c.method != "picard") fail_schema("time.method must be rk4 or picard");
    if (c.depth < 1) fail_schema("time.depth must be at least 1");
    if (!(c.dt >= 0.0)) fail_schema("time.dt must be nonnegative (0 = automatic)");
    if (c.n_out < 0) fail_schema("time.n_out must be nonnegative");

    if (c.m_max < 1) fail_schema("hierarchy.m_max must be at least 1");
    if (c.duhamel_j < 0) fail_schema("hierarchy.j must be nonnegative");

    if (c.seeds.empty()) fail_schema("seeds must be non-empty");
    double wsum = 0.0;
    for (size_t i = 0; i < c.seeds.size(); ++i) {
        const SeedSpec& s = c.seeds[i];
        const std::string where = "seeds[" + std::to_string(i) + "]";
        if (!(s.weight > 0.0)) fail_schema(where + ".weight must be positive");
        wsum += s.weight;
        switch (s.kind) {
            case SeedSpec::Kind::gaussian:
                if (!(s.sigma > 0.0)) fail_schema(where + ".sigma must be positive");
                if (!(s.amplitude >= 0.0)) fail_schema(where + ".amplitude must be nonnegative");
                break;
            case SeedSpec::Kind::rayleigh_jeans:
                if (!(s.a >= 0.0)) fail_schema(where + ".a must be nonnegative");
                if (!(s.b > 0.0)) fail_schema(where + ".b must be positive");
                break;
            case SeedSpec::Kind::file:
                if (s.path.empty()) fail_schema(where + ".path must be set for file seeds");
                break;
        }
    }
    if (c.seeds.size() > 1 && std::abs(wsum - 1.0) > 1e-12)
        fail_schema("mixture seed weights must sum to 1");

    if (c.output_dir.empty()) fail_schema("output_dir must be non-empty");
    if (c.workers < 0) fail_schema("workers must be nonnegative");
    if (!(c.residual_tolerance >= 0.0)) fail_schema("residual_tolerance must be nonnegative");
}

std::string run_config_canonical(const RunConfig& c) {
    json d;
    d["dispersion"]["kind"] = to_string(c.dispersion);
    d["dispersion"]["coeffs"] = c.dispersion_coeffs;
    d["dispersion"]["verify_radius"] = c.verify_radius;
    d["dispersion"]["verify_samples"] = c.verify_samples;
    d["grid"]["n"] = c.grid.n;
    d["grid"]["k"] = c.grid.k;
    d["quadrature"]["n_slices"] = c.quad.n_slices;
    d["quadrature"]["n_angular"] = c.quad.n_angular;
    d["quadrature"]["root_tol"] = c.quad.root_tol;
    d["norms"]["s"] = c.s;
    d["norms"]["gamma"] = c.gamma;
    d["norms"]["eps1"] = c.eps1;
    d["norms"]["eps2"] = c.eps2;
    d["time"]["t_final"] = c.t_final;
    d["time"]["method"] = c.method;
    d["time"]["depth"] = c.depth;
    d["time"]["dt"] = c.dt;
    d["time"]["n_out"] = c.n_out;
    d["hierarchy"]["m_max"] = c.m_max;
    d["hierarchy"]["j"] = c.duhamel_j;
    d["hierarchy"]["compat_xi1"] = c.compat_xi1;
    d["seeds"] = json::array();
    for (const SeedSpec& s : c.seeds) {
        json e;
        switch (s.kind) {
            case SeedSpec::Kind::gaussian:
                e["kind"] = "gaussian";
                e["sigma"] = s.sigma;
                e["amplitude"] = s.amplitude;
                break;
            case SeedSpec::Kind::rayleigh_jeans:
                e["kind"] = "rayleigh_jeans";
                e["a"] = s.a;
                e["b"] = s.b;
                break;
            case SeedSpec::Kind::file:
                e["kind"] = "file";
                e["path"] = s.path;
                break;
        }
        e["weight"] = s.weight;
        d["seeds"].push_back(e);
    }
    d["output_dir"] = c.output_dir;
    d["workers"] = c.workers;
    d["rng_seed"] = c.rng_seed;
    d["residual_tolerance"] = c.residual_tolerance;
    return d.dump(2);
}

std::string config_hash(const RunConfig& c) {
    const std::string text = run_config_canonical(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

DispersionRelation build_dispersion(const RunConfig& c) {
    const std::vector<double>& a = c.dispersion_coeffs;
    switch (c.dispersion) {
        case DispersionKind::schrodinger:
            return DispersionRelation::schrodinger();
        case DispersionKind::bogoliubov:
            if (a.empty()) return DispersionRelation::bogoliubov(1.0, 1.0);
            return DispersionRelation::bogoliubov(a[0], a[1]);
        case DispersionKind::bohm_pines:
            if (a.empty()) return DispersionRelation::bohm_pines(1.0, 1.0, 1.0);
            return DispersionRelation::bohm_pines(a[0], a[1], a[2]);
        case DispersionKind::low_temp_poly:
            if (a.empty()) return DispersionRelation::low_temp_poly(0.0, 1.0, 0.5);
            return DispersionRelation::low_temp_poly(a[0], a[1], a[2]);
    }
    throw ParameterOutOfRange("config: unsupported dispersion kind");
}

DispersionRelation build_verified_dispersion(const RunConfig& c) {
    DispersionRelation rel = build_dispersion(c);
    const AssumptionReport rep = verify_assumptions(rel, c.verify_radius, c.verify_samples);
    if (!rep.all_hold())
        throw UnverifiedDispersion("dispersion assumptions fail: " + rep.violation);
    return rel;
}

GridField build_seed_field(const SeedSpec& seed, const GridSpec& grid,
                           const DispersionRelation& rel) {
    switch (seed.kind) {
        case SeedSpec::Kind::gaussian:
            return make_gaussian(grid, seed.sigma, seed.amplitude);
        case SeedSpec::Kind::rayleigh_jeans:
            return make_rayleigh_jeans(grid, rel, seed.a, seed.b);
        case SeedSpec::Kind::file: {
            GridField f = read_wkf1(seed.path);
            if (!(f.spec() == grid))
                throw ParameterOutOfRange("config: field file grid differs from config grid: " +
                                          seed.path);
            return f;
        }
    }
    throw ParameterOutOfRange("config: unsupported seed kind");
}

std::vector<std::pair<double, GridField>> build_seed_list(const RunConfig& c,
                                                          const DispersionRelation& rel) {
    std::vector<std::pair<double, GridField>> out;
    out.reserve(c.seeds.size());
    for (const SeedSpec& s : c.seeds) out.emplace_back(s.weight, build_seed_field(s, c.grid, rel));
    return out;
}

GridField build_initial_field(const RunConfig& c, const DispersionRelation& rel) {
    GridField acc(c.grid);
    for (const SeedSpec& s : c.seeds) {
        acc = field_axpy(s.weight, build_seed_field(s, c.grid, rel), acc);
    }
    return acc;
}

}  // namespace wavekin
