#include "deadoil/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include "deadoil/field_io.hpp"

namespace deadoil {

namespace {

const std::map<std::string, std::vector<std::string>> kSchema = {
    {"grid", {"nx", "ny", "lx", "ly"}},
    {"time", {"T", "N"}},
    {"state", {"init_u", "init_p"}},
    {"coefficients", {"family", "table", "c1", "c2", "c3"}},
    {"cost", {"beta1", "q0", "target_u", "target_p"}},
    {"control", {"init"}},
    {"optimizer", {"grad_tol", "max_iter", "armijo_c", "shrink"}},
    {"output", {"dir", "stride"}},
    {"gradcheck", {"directions", "step", "tol", "seed"}},
    {"adjoint", {"aggregate_state", "tol", "max_iter"}},
    {"verify", {"r_min", "r_max", "samples"}},
};

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_real(const std::string& v, const std::string& where) {
    try {
        size_t idx = 0;
        const double x = std::stod(v, &idx);
        require(idx == v.size() && std::isfinite(x), where + ": not a number: '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& where) {
    try {
        size_t idx = 0;
        const long long x = std::stoll(v, &idx);
        require(idx == v.size(), where + ": not an integer: '" + v + "'");
        require(x >= std::numeric_limits<int>::min() && x <= std::numeric_limits<int>::max(),
                where + ": integer out of range: '" + v + "'");
        return static_cast<int>(x);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not an integer: '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& v, const std::string& where) {
    try {
        require(v.empty() || v[0] != '-', where + ": must be nonnegative: '" + v + "'");
        size_t idx = 0;
        const unsigned long long x = std::stoull(v, &idx);
        require(idx == v.size(), where + ": not an integer: '" + v + "'");
        return static_cast<uint64_t>(x);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not an integer: '" + v + "'");
    }
}

struct RawConfig {
    std::string origin;
    std::map<std::string, std::map<std::string, std::string>> values;
};

RawConfig parse_raw(const std::string& text, const std::string& origin) {
    RawConfig raw;
    raw.origin = origin;
    std::istringstream in(text);
    std::string line, section;
    std::set<std::string> declared;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        const std::string at = origin + ":" + std::to_string(lineno);
        if (s.front() == '[') {
            require(s.back() == ']', at + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            require(kSchema.count(section) > 0, at + ": unknown section [" + section + "]");
            require(declared.insert(section).second, at + ": duplicate section [" + section + "]");
            continue;
        }
        const size_t eq = s.find('=');
        require(eq != std::string::npos, at + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        require(!section.empty(), at + ": key '" + key + "' outside any section");
        require(!key.empty() && !val.empty(), at + ": empty key or value");
        const auto& allowed = kSchema.at(section);
        require(std::find(allowed.begin(), allowed.end(), key) != allowed.end(),
                at + ": unknown key '" + key + "' in [" + section + "]");
        auto& sec = raw.values[section];
        require(sec.emplace(key, val).second, at + ": duplicate key '" + key + "'");
    }
    return raw;
}

struct Reader {
    const RawConfig& raw;

    const std::string* find(const std::string& sec, const std::string& key) const {
        const auto s = raw.values.find(sec);
        if (s == raw.values.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
    bool has(const std::string& sec, const std::string& key) const { return find(sec, key); }
    std::string where(const std::string& sec, const std::string& key) const {
        return raw.origin + ": [" + sec + "] " + key;
    }
    const std::string& required(const std::string& sec, const std::string& key) const {
        const std::string* p = find(sec, key);
        require(p != nullptr, raw.origin + ": missing required key " + sec + "." + key);
        return *p;
    }
    std::string str(const std::string& sec, const std::string& key, const std::string& def) const {
        const std::string* p = find(sec, key);
        return p ? *p : def;
    }
    double real(const std::string& sec, const std::string& key, double def) const {
        const std::string* p = find(sec, key);
        return p ? parse_real(*p, where(sec, key)) : def;
    }
    double real_req(const std::string& sec, const std::string& key) const {
        return parse_real(required(sec, key), where(sec, key));
    }
    int integer(const std::string& sec, const std::string& key, int def) const {
        const std::string* p = find(sec, key);
        return p ? parse_int(*p, where(sec, key)) : def;
    }
    int integer_req(const std::string& sec, const std::string& key) const {
        return parse_int(required(sec, key), where(sec, key));
    }
    uint64_t u64(const std::string& sec, const std::string& key, uint64_t def) const {
        const std::string* p = find(sec, key);
        return p ? parse_u64(*p, where(sec, key)) : def;
    }
};

void check_field_spec(const std::string& spec, const std::string& where) {
    const auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "constant") {
        require(parts.size() == 2, where + ": expected constant:<value>");
        parse_real(parts[1], where);
    } else if (kind == "sines") {
        require(parts.size() == 2 || parts.size() == 4,
                where + ": expected sines:<amp> or sines:<amp>:<kx>:<ky>");
        parse_real(parts[1], where);
        if (parts.size() == 4) {
            require(parse_int(parts[2], where) >= 1 && parse_int(parts[3], where) >= 1,
                    where + ": mode numbers must be >= 1");
        }
    } else if (kind == "file") {
        require(parts.size() == 2 && !parts[1].empty(), where + ": expected file:<path>");
        require(std::filesystem::exists(parts[1]), where + ": file not found: " + parts[1]);
    } else {
        throw ConfigError(where + ": unknown field spec '" + spec +
                          "' (want constant:, sines:, or file:)");
    }
}

void check_control_spec(const std::string& spec, const std::string& where) {
    if (spec == "zero") return;
    const auto parts = split(spec, ':');
    if (parts[0] == "constant") {
        require(parts.size() == 2, where + ": expected constant:<value>");
        parse_real(parts[1], where);
    } else if (parts[0] == "file") {
        require(parts.size() == 2 && !parts[1].empty(), where + ": expected file:<dir>");
        require(std::filesystem::is_directory(parts[1]),
                where + ": directory not found: " + parts[1]);
    } else {
        throw ConfigError(where + ": unknown control spec '" + spec +
                          "' (want zero, constant:, or file:)");
    }
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    const RawConfig raw = parse_raw(text, origin);
    const Reader r{raw};
    ScenarioConfig cfg;

    cfg.nx = r.integer_req("grid", "nx");
    cfg.ny = r.integer_req("grid", "ny");
    cfg.lx = r.real_req("grid", "lx");
    cfg.ly = r.real_req("grid", "ly");
    cfg.T = r.real_req("time", "T");
    cfg.N = r.integer_req("time", "N");

    cfg.init_u = r.str("state", "init_u", cfg.init_u);
    cfg.init_p = r.str("state", "init_p", cfg.init_p);

    const bool has_table = r.has("coefficients", "table");
    require(!(has_table && r.has("coefficients", "family")),
            origin + ": [coefficients] family and table are mutually exclusive");
    if (has_table) {
        cfg.coef_family.clear();
        cfg.coef_table = r.str("coefficients", "table", "");
        require(std::filesystem::exists(cfg.coef_table),
                origin + ": coefficient table not found: " + cfg.coef_table);
        cfg.c1 = r.real_req("coefficients", "c1");
        cfg.c2 = r.real_req("coefficients", "c2");
        cfg.c3 = r.real_req("coefficients", "c3");
    } else {
        cfg.coef_family = r.str("coefficients", "family", cfg.coef_family);
        cfg.c1 = r.real("coefficients", "c1", cfg.c1);
        cfg.c2 = r.real("coefficients", "c2", cfg.c2);
        require(!r.has("coefficients", "c3"),
                origin + ": [coefficients] c3 is derived for builtin families");
    }

    cfg.beta1 = r.real("cost", "beta1", cfg.beta1);
    cfg.q0 = r.real("cost", "q0", cfg.q0);
    cfg.target_u = r.str("cost", "target_u", cfg.target_u);
    cfg.target_p = r.str("cost", "target_p", cfg.target_p);
    cfg.control_init = r.str("control", "init", cfg.control_init);

    cfg.opt.grad_tol = r.real("optimizer", "grad_tol", cfg.opt.grad_tol);
    cfg.opt.max_iter = r.integer("optimizer", "max_iter", cfg.opt.max_iter);
    cfg.opt.armijo_c = r.real("optimizer", "armijo_c", cfg.opt.armijo_c);
    cfg.opt.shrink = r.real("optimizer", "shrink", cfg.opt.shrink);

    cfg.out_dir = r.str("output", "dir", cfg.out_dir);
    cfg.stride = r.integer("output", "stride", cfg.stride);
    require(cfg.stride >= 1, origin + ": output.stride must be >= 1");

    cfg.gc_directions = r.integer("gradcheck", "directions", cfg.gc_directions);
    cfg.gc_step = r.real("gradcheck", "step", cfg.gc_step);
    cfg.gc_tol = r.real("gradcheck", "tol", cfg.gc_tol);
    cfg.gc_seed = r.u64("gradcheck", "seed", cfg.gc_seed);
    require(cfg.gc_directions >= 1 && cfg.gc_step > 0 && cfg.gc_tol > 0,
            origin + ": [gradcheck] directions >= 1, step > 0, tol > 0 required");

    cfg.aggregate_state = r.str("adjoint", "aggregate_state", cfg.aggregate_state);
    require(cfg.aggregate_state == "terminal" || cfg.aggregate_state == "time-average",
            origin + ": [adjoint] aggregate_state must be 'terminal' or 'time-average'");
    cfg.adj_tol = r.real("adjoint", "tol", cfg.adj_tol);
    cfg.adj_max_iter = r.integer("adjoint", "max_iter", cfg.adj_max_iter);
    require(cfg.adj_tol > 0 && cfg.adj_max_iter >= 1,
            origin + ": [adjoint] tol > 0 and max_iter >= 1 required");
    cfg.opt.kkt_tol = cfg.adj_tol;
    cfg.opt.kkt_max_iter = cfg.adj_max_iter;
    cfg.opt.kkt_mode = cfg.aggregate_state == "terminal" ? AggregateStateMode::terminal
                                                         : AggregateStateMode::time_average;

    cfg.vr_min = r.real("verify", "r_min", cfg.vr_min);
    cfg.vr_max = r.real("verify", "r_max", cfg.vr_max);
    cfg.vr_samples = r.integer("verify", "samples", cfg.vr_samples);
    require(cfg.vr_min < cfg.vr_max && cfg.vr_samples >= 2,
            origin + ": [verify] r_min < r_max and samples >= 2 required");

    check_field_spec(cfg.init_u, origin + ": state.init_u");
    check_field_spec(cfg.init_p, origin + ": state.init_p");
    check_field_spec(cfg.target_u, origin + ": cost.target_u");
    check_field_spec(cfg.target_p, origin + ": cost.target_p");
    check_control_spec(cfg.control_init, origin + ": control.init");
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path);
}

ScalarField resolve_field_spec(const std::string& spec, const Grid2D& g,
                               const std::string& where) {
    check_field_spec(spec, where);
    const auto parts = split(spec, ':');
    if (parts[0] == "constant") {
        return ScalarField(g, parse_real(parts[1], where));
    }
    if (parts[0] == "sines") {
        const double amp = parse_real(parts[1], where);
        const int kx = parts.size() == 4 ? parse_int(parts[2], where) : 1;
        const int ky = parts.size() == 4 ? parse_int(parts[3], where) : 1;
        return sample_field(g, [&](double x, double y) {
            return amp * std::sin(kx * std::numbers::pi * x / g.lx) *
                   std::sin(ky * std::numbers::pi * y / g.ly);
        });
    }
    return read_field_csv(parts[1], g);
}

ControlTrajectory resolve_control_spec(const std::string& spec, const Grid2D& g, int N,
                                       const std::string& where) {
    check_control_spec(spec, where);
    if (spec == "zero") return zero_controls(g, N);
    const auto parts = split(spec, ':');
    ControlTrajectory out;
    if (parts[0] == "constant") {
        out.f.assign(static_cast<size_t>(N), ScalarField(g, parse_real(parts[1], where)));
        return out;
    }
    for (int n = 0; n < N; ++n) {
        char name[32];
        std::snprintf(name, sizeof(name), "f_%04d.csv", n);
        const std::filesystem::path p = std::filesystem::path(parts[1]) / name;
        require(std::filesystem::exists(p), where + ": control level file not found: " + p.string());
        out.f.push_back(read_field_csv(p.string(), g));
    }
    return out;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    Scenario s;
    s.grid = build_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
    s.tg = build_time_grid(cfg.T, cfg.N);
    s.coef = cfg.coef_table.empty() ? builtin_set(cfg.coef_family, cfg.c1, cfg.c2)
                                    : tabulated_set(cfg.coef_table, cfg.c1, cfg.c2, cfg.c3);
    s.cost.beta1 = cfg.beta1;
    s.cost.q0 = cfg.q0;
    s.cost.target_u = resolve_field_spec(cfg.target_u, s.grid, "cost.target_u");
    s.cost.target_p = resolve_field_spec(cfg.target_p, s.grid, "cost.target_p");
    validate(s.cost);
    s.u0 = resolve_field_spec(cfg.init_u, s.grid, "state.init_u");
    s.p0 = resolve_field_spec(cfg.init_p, s.grid, "state.init_p");
    s.control0 = resolve_control_spec(cfg.control_init, s.grid, cfg.N, "control.init");
    s.agg_mode = cfg.opt.kkt_mode;
    validate(cfg.opt);
    return s;
}

std::map<std::string, std::string> manifest_entries(const ScenarioConfig& cfg) {
    std::map<std::string, std::string> m;
    m["grid.nx"] = std::to_string(cfg.nx);
    m["grid.ny"] = std::to_string(cfg.ny);
    m["grid.lx"] = format_double(cfg.lx);
    m["grid.ly"] = format_double(cfg.ly);
    m["time.T"] = format_double(cfg.T);
    m["time.N"] = std::to_string(cfg.N);
    m["state.init_u"] = cfg.init_u;
    m["state.init_p"] = cfg.init_p;
    if (cfg.coef_table.empty()) {
        m["coefficients.family"] = cfg.coef_family;
    } else {
        m["coefficients.table"] = cfg.coef_table;
        m["coefficients.c3"] = format_double(cfg.c3);
    }
    m["coefficients.c1"] = format_double(cfg.c1);
    m["coefficients.c2"] = format_double(cfg.c2);
    m["cost.beta1"] = format_double(cfg.beta1);
    m["cost.q0"] = format_double(cfg.q0);
    m["cost.target_u"] = cfg.target_u;
    m["cost.target_p"] = cfg.target_p;
    m["control.init"] = cfg.control_init;
    m["optimizer.grad_tol"] = format_double(cfg.opt.grad_tol);
    m["optimizer.max_iter"] = std::to_string(cfg.opt.max_iter);
    m["optimizer.armijo_c"] = format_double(cfg.opt.armijo_c);
    m["optimizer.shrink"] = format_double(cfg.opt.shrink);
    m["output.stride"] = std::to_string(cfg.stride);
    m["gradcheck.directions"] = std::to_string(cfg.gc_directions);
    m["gradcheck.step"] = format_double(cfg.gc_step);
    m["gradcheck.tol"] = format_double(cfg.gc_tol);
    m["gradcheck.seed"] = std::to_string(cfg.gc_seed);
    m["adjoint.aggregate_state"] = cfg.aggregate_state;
    m["adjoint.tol"] = format_double(cfg.adj_tol);
    m["adjoint.max_iter"] = std::to_string(cfg.adj_max_iter);
    m["verify.r_min"] = format_double(cfg.vr_min);
    m["verify.r_max"] = format_double(cfg.vr_max);
    m["verify.samples"] = std::to_string(cfg.vr_samples);
    return m;
}

}  // namespace deadoil
