#include "rotaflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rotaflow {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string> split_list(const std::string& raw, std::size_t line) {
    std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw ConfigError("unterminated list", line);
        s = s.substr(1, s.size() - 2);
    }
    std::vector<std::string> out;
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty list element", line);
        out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError("expected a number, got '" + s + "'", line);
    }
    return v;
}

long long to_int(const std::string& s, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("expected an integer, got '" + s + "'", line);
    return v;
}

std::size_t to_count(const std::string& s, std::size_t line) {
    const long long v = to_int(s, line);
    if (v < 0) throw ConfigError("expected a non-negative integer, got '" + s + "'", line);
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& s, std::size_t line) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("expected a boolean, got '" + s + "'", line);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += f(v[i]);
    }
    return out + "]";
}

std::vector<std::vector<int>> unflatten(const std::vector<int>& flat, std::size_t m, const char* key) {
    if (flat.size() % m != 0) {
        throw std::invalid_argument(std::string(key) + " must hold whole " + std::to_string(m) + "-tuples");
    }
    std::vector<std::vector<int>> out;
    for (std::size_t k = 0; k < flat.size(); k += m) out.emplace_back(flat.begin() + k, flat.begin() + k + m);
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::size_t)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid.m", [](RunConfig& c, const std::string& v, std::size_t l) { c.m = to_count(v, l); }},
        {"grid.lengths",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.lengths.clear();
             for (const auto& s : split_list(v, l)) c.lengths.push_back(to_double(s, l));
         }},
        {"grid.resolution",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.resolution.clear();
             for (const auto& s : split_list(v, l)) c.resolution.push_back(to_count(s, l));
         }},
        {"grid.d", [](RunConfig& c, const std::string& v, std::size_t l) { c.d = to_count(v, l); }},
        {"flux.kind", [](RunConfig& c, const std::string& v, std::size_t) { c.flux_kind = unquote(v); }},
        {"flux.coeffs",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.flux_coeffs.clear();
             for (const auto& s : split_list(v, l)) c.flux_coeffs.push_back(to_double(s, l));
         }},
        {"flux.mod_offset", [](RunConfig& c, const std::string& v, std::size_t l) { c.mod_offset = to_double(v, l); }},
        {"flux.mod_modes",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.mod_modes.clear();
             for (const auto& s : split_list(v, l)) c.mod_modes.push_back(static_cast<int>(to_int(s, l)));
         }},
        {"flux.mod_cos",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.mod_cos.clear();
             for (const auto& s : split_list(v, l)) c.mod_cos.push_back(to_double(s, l));
         }},
        {"flux.mod_sin",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.mod_sin.clear();
             for (const auto& s : split_list(v, l)) c.mod_sin.push_back(to_double(s, l));
         }},
        {"solver.dt", [](RunConfig& c, const std::string& v, std::size_t l) { c.dt = to_double(v, l); }},
        {"solver.t_end", [](RunConfig& c, const std::string& v, std::size_t l) { c.t_end = to_double(v, l); }},
        {"solver.dealias", [](RunConfig& c, const std::string& v, std::size_t l) { c.dealias = to_bool(v, l); }},
        {"output.dir", [](RunConfig& c, const std::string& v, std::size_t) { c.out_dir = unquote(v); }},
        {"output.record_every",
         [](RunConfig& c, const std::string& v, std::size_t l) { c.record_every = to_count(v, l); }},
        {"output.svg", [](RunConfig& c, const std::string& v, std::size_t l) { c.svg = to_bool(v, l); }},
        {"output.svg_frames", [](RunConfig& c, const std::string& v, std::size_t l) { c.svg_frames = to_count(v, l); }},
        {"output.modes", [](RunConfig& c, const std::string& v, std::size_t l) { c.track_modes = to_count(v, l); }},
        {"initial.preset", [](RunConfig& c, const std::string& v, std::size_t) { c.preset = unquote(v); }},
        {"initial.params",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.params.clear();
             for (const auto& s : split_list(v, l)) c.params.push_back(to_double(s, l));
         }},
        {"initial.modes",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.preset_modes.clear();
             for (const auto& s : split_list(v, l)) c.preset_modes.push_back(static_cast<int>(to_int(s, l)));
         }},
        {"run.mode", [](RunConfig& c, const std::string& v, std::size_t) { c.run_mode = unquote(v); }},
        {"seed",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.seed = static_cast<std::uint64_t>(to_count(v, l));
         }},
        {"check.sphere_tol", [](RunConfig& c, const std::string& v, std::size_t l) { c.sphere_tol = to_double(v, l); }},
        {"check.decay_tol", [](RunConfig& c, const std::string& v, std::size_t l) { c.decay_tol = to_double(v, l); }},
        {"cell.p",
         [](RunConfig& c, const std::string& v, std::size_t l) {
             c.cell_p.clear();
             for (const auto& s : split_list(v, l)) c.cell_p.push_back(to_double(s, l));
         }},
    };
    return table;
}

std::size_t first_line(const std::map<std::string, std::size_t>& lines, const std::string& prefix) {
    std::size_t best = 0;
    for (const auto& [key, line] : lines) {
        if (key.rfind(prefix, 0) == 0 && (best == 0 || line < best)) best = line;
    }
    return best;
}

}  // namespace

std::string RunConfig::canonical() const {
    auto ints = [](const auto& v) { return join(v, [](auto x) { return std::to_string(x); }); };
    auto reals = [](const std::vector<double>& v) { return join(v, fmt); };
    std::map<std::string, std::string> kv = {
        {"grid.m", std::to_string(m)},
        {"grid.lengths", reals(lengths)},
        {"grid.resolution", ints(resolution)},
        {"grid.d", std::to_string(ambient_dim())},
        {"flux.kind", flux_kind},
        {"flux.coeffs", reals(flux_coeffs)},
        {"flux.mod_offset", mod_offset ? fmt(*mod_offset) : "none"},
        {"flux.mod_modes", ints(mod_modes)},
        {"flux.mod_cos", reals(mod_cos)},
        {"flux.mod_sin", reals(mod_sin)},
        {"solver.dt", fmt(dt)},
        {"solver.t_end", fmt(t_end)},
        {"solver.dealias", dealias ? "true" : "false"},
        {"output.record_every", std::to_string(record_every)},
        {"output.svg", svg ? "true" : "false"},
        {"output.svg_frames", std::to_string(svg_frames)},
        {"output.modes", std::to_string(track_modes)},
        {"initial.preset", preset},
        {"initial.params", reals(params)},
        {"initial.modes", ints(preset_modes)},
        {"run.mode", run_mode},
        {"seed", std::to_string(seed)},
        {"check.sphere_tol", fmt(sphere_tol)},
        {"check.decay_tol", fmt(decay_tol)},
        {"cell.p", reals(cell_p)},
    };
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::string RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::size_t> lines;
    std::stringstream ss(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("unknown key '" + key + "'", line);
        if (lines.contains(key)) throw ConfigError("duplicate key '" + key + "'", line);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
        it->second(cfg, value, line);
        lines[key] = line;
    }

    auto check = [&](const std::string& prefix, auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what(), first_line(lines, prefix));
        } catch (const std::out_of_range& e) {
            throw ConfigError(e.what(), first_line(lines, prefix));
        }
    };
    check("grid.", [&] { (void)build_grid(cfg); });
    check("flux.", [&] { (void)build_flux(cfg); });
    check("initial.", [&] {
        const InitialPreset preset = build_preset(cfg);
        const PeriodicGrid grid = build_grid(cfg);
        if (cfg.run_mode == "geometric") {
            (void)make_initial(preset, grid, cfg.ambient_dim());
        } else {
            (void)initial_radius(preset, grid);
        }
    });
    check("solver.", [&] { (void)build_solve_config(cfg); });
    if (cfg.run_mode != "geometric" && cfg.run_mode != "scalar") {
        throw ConfigError("run.mode must be 'geometric' or 'scalar'", first_line(lines, "run."));
    }
    if (cfg.ambient_dim() < 2) throw ConfigError("grid.d must be at least 2", first_line(lines, "grid.d"));
    if (cfg.record_every == 0) {
        throw ConfigError("output.record_every must be at least 1", first_line(lines, "output.record_every"));
    }
    if (cfg.cell_p.empty()) throw ConfigError("cell.p needs at least one value", first_line(lines, "cell."));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", 0);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

PeriodicGrid build_grid(const RunConfig& cfg) { return make_grid(cfg.m, cfg.lengths, cfg.resolution); }

FluxSpec build_flux(const RunConfig& cfg) {
    const std::size_t m = cfg.m;
    FluxSpec spec = FluxSpec::zero(m);
    if (cfg.flux_kind == "zero") {
        if (!cfg.flux_coeffs.empty()) throw std::invalid_argument("flux.coeffs must be empty for the zero flux");
    } else if (cfg.flux_kind == "burgers") {
        if (!cfg.flux_coeffs.empty()) throw std::invalid_argument("flux.coeffs must be empty for the burgers flux");
        spec = FluxSpec::burgers(m);
    } else if (cfg.flux_kind == "constant") {
        std::vector<double> c = cfg.flux_coeffs;
        if (c.size() == 1) c.assign(m, c.front());
        if (c.size() != m) throw std::invalid_argument("flux.coeffs for a constant flux needs 1 or m speeds");
        spec = FluxSpec::constant(c);
    } else if (cfg.flux_kind == "poly") {
        if (cfg.flux_coeffs.empty()) throw std::invalid_argument("flux.coeffs must list the polynomial coefficients");
        spec = FluxSpec::polynomial(m, cfg.flux_coeffs);
    } else {
        throw std::invalid_argument("flux.kind must be one of zero, constant, burgers, poly");
    }

    const bool any_mod = cfg.mod_offset || !cfg.mod_modes.empty() || !cfg.mod_cos.empty() || !cfg.mod_sin.empty();
    if (!any_mod) return spec;
    const auto modes = unflatten(cfg.mod_modes, m, "flux.mod_modes");
    const std::vector<double> zeros(modes.size(), 0.0);
    const auto& cs = cfg.mod_cos.empty() ? zeros : cfg.mod_cos;
    const auto& sn = cfg.mod_sin.empty() ? zeros : cfg.mod_sin;
    if (cs.size() != modes.size() || sn.size() != modes.size()) {
        throw std::invalid_argument("flux.mod_cos and flux.mod_sin need one entry per modulation mode");
    }
    Modulation a;
    a.offset = cfg.mod_offset.value_or(1.0);
    for (std::size_t k = 0; k < modes.size(); ++k) a.terms.push_back({modes[k], cs[k], sn[k]});
    for (std::size_t i = 0; i < m; ++i) spec = spec.with_modulation(i, a);
    return spec;
}

InitialPreset build_preset(const RunConfig& cfg) {
    // An empty initial.params selects the preset's defaults.
    std::vector<double> p = cfg.params;
    if (p.empty()) {
        if (cfg.preset == "ellipse") p = {2.0, 1.0};
        if (cfg.preset == "perturbed_sphere") p = {1.0, 0.2};
        if (cfg.preset == "trig_random") p = {3.0, 0.1};
    }
    if (cfg.preset == "ellipse") {
        if (p.size() != 2) throw std::invalid_argument("initial.params for ellipse is [a, b]");
        return EllipsePreset{p[0], p[1]};
    }
    if (cfg.preset == "perturbed_sphere") {
        if (p.size() != 2) throw std::invalid_argument("initial.params for perturbed_sphere is [R, amplitude]");
        auto modes = unflatten(cfg.preset_modes, cfg.m, "initial.modes");
        if (modes.empty()) {
            modes.emplace_back(cfg.m, 0);
            modes.back()[0] = 1;
        }
        return PerturbedSpherePreset{p[0], p[1], modes};
    }
    if (cfg.preset == "trig_random") {
        if (p.size() != 2) throw std::invalid_argument("initial.params for trig_random is [max_mode, amplitude]");
        if (p[0] != std::floor(p[0])) throw std::invalid_argument("trig_random max_mode must be an integer");
        return TrigRandomPreset{cfg.seed, static_cast<int>(p[0]), p[1]};
    }
    throw std::invalid_argument("initial.preset must be one of ellipse, perturbed_sphere, trig_random");
}

SolveConfig build_solve_config(const RunConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solver.dt must be positive");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("solver.t_end must be positive");
    if (cfg.dt > cfg.t_end) throw std::invalid_argument("solver.dt must not exceed solver.t_end");
    SolveConfig s;
    s.dt = cfg.dt;
    s.t_end = cfg.t_end;
    s.dealias = cfg.dealias;
    s.record_every = cfg.record_every == 0 ? 1 : cfg.record_every;
    return s;
}

}  // namespace rotaflow
