#include "rabinovich/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rabinovich::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::string body = trim(s);
    if (body.size() >= 2 && ((body.front() == '(' && body.back() == ')') || (body.front() == '[' && body.back() == ']')))
        body = body.substr(1, body.size() - 2);
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(body);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

double parse_real(const std::string& key, const std::string& v) {
    double x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        throw ConfigError(key + ": expected a real number, got '" + v + "'");
    if (!std::isfinite(x)) throw ConfigError(key + ": value must be finite");
    return x;
}

long parse_int(const std::string& key, const std::string& v) {
    long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return x;
}

double positive(const std::string& key, double x) {
    if (!(x > 0)) throw ConfigError(key + ": must be > 0");
    return x;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "system", "m", "x0", "alpha", "tau", "kernel.type", "kernel.a", "kernel.tau", "kernel.alpha",
        "eps.0", "eps.1", "eps.2", "eps.3", "delta.0", "delta.1", "delta.2", "delta.3", "mode", "dt",
        "t_end", "monitors", "output.path", "output.format", "seed", "region", "grid"};
    return keys;
}

bool has_prefix(const std::map<std::string, std::string>& kv, std::string_view prefix) {
    return std::any_of(kv.begin(), kv.end(), [&](const auto& e) { return e.first.starts_with(prefix); });
}

Kernel build_kernel(const std::map<std::string, std::string>& kv) {
    if (!kv.count("kernel.type")) throw ConfigError("kernel.type: required for delay systems");
    const std::string type = kv.at("kernel.type");
    std::set<std::string> allowed;
    auto need = [&](const std::string& k) {
        allowed.insert(k);
        if (!kv.count(k)) throw ConfigError(k + ": required for kernel.type = " + type);
        return parse_real(k, kv.at(k));
    };
    std::optional<Kernel> k;
    try {
        if (type == "uniform") {
            const double a = need("kernel.a");
            const double tau = need("kernel.tau");
            if (a < 0) throw ConfigError("kernel.a: must be >= 0");
            k = Kernel::uniform(a, positive("kernel.tau", tau));
        } else if (type == "exponential") {
            k = Kernel::exponential(positive("kernel.alpha", need("kernel.alpha")));
        } else if (type == "erlang") {
            k = Kernel::erlang(positive("kernel.alpha", need("kernel.alpha")));
        } else if (type == "dirac") {
            k = Kernel::dirac(positive("kernel.tau", need("kernel.tau")));
        } else {
            throw ConfigError("kernel.type: unknown kernel '" + type + "' (uniform, exponential, erlang, dirac)");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const DomainError& e) {
        throw ConfigError(std::string("kernel: ") + e.what());
    }
    for (const auto& [key, v] : kv)
        if (key.starts_with("kernel.") && key != "kernel.type" && !allowed.count(key))
            throw ConfigError(key + ": not used by kernel.type = " + type);
    return *k;
}

BlendWeights build_weights(const std::map<std::string, std::string>& kv) {
    std::array<double, 4> e{}, d{};
    for (int i = 0; i < 4; ++i) {
        const std::string ek = "eps." + std::to_string(i), dk = "delta." + std::to_string(i);
        if (!kv.count(ek)) throw ConfigError(ek + ": required for delay systems");
        if (!kv.count(dk)) throw ConfigError(dk + ": required for delay systems");
        e[i] = parse_real(ek, kv.at(ek));
        d[i] = parse_real(dk, kv.at(dk));
    }
    try {
        return BlendWeights(e, d);
    } catch (const DomainError& ex) {
        throw ConfigError(std::string("eps/delta: ") + ex.what());
    }
}

void forbid(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& why) {
    if (kv.count(key)) throw ConfigError(key + ": " + why);
}

}  // namespace

const std::vector<std::string>& system_ids() {
    static const std::vector<std::string> ids = {"classical", "metriplectic-first", "metriplectic-second",
                                                 "literal38", "literal10", "delay", "delay-revised",
                                                 "fractional", "fractional-delay"};
    return ids;
}

bool is_fractional_system(std::string_view s) { return s == "fractional" || s == "fractional-delay"; }

bool is_delay_system(std::string_view s) { return s == "delay" || s == "delay-revised" || s == "fractional-delay"; }

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
        if (!known_keys().count(key))
            throw ConfigError(key + ": unknown key (line " + std::to_string(lineno) + ")");
        if (value.empty()) throw ConfigError(key + ": empty value (line " + std::to_string(lineno) + ")");
        if (!kv.emplace(key, value).second)
            throw ConfigError(key + ": duplicate key (line " + std::to_string(lineno) + ")");
        cfg.entries.emplace_back(key, value);
    }

    if (!kv.count("system")) throw ConfigError("system: required");
    cfg.system = kv["system"];
    const auto& ids = system_ids();
    if (std::find(ids.begin(), ids.end(), cfg.system) == ids.end())
        throw ConfigError("system: unknown system '" + cfg.system + "'");
    const bool frac = is_fractional_system(cfg.system);
    const bool delay = is_delay_system(cfg.system);

    if (kv.count("m")) cfg.m = parse_real("m", kv["m"]);
    if (kv.count("x0")) {
        const auto parts = split_list(kv["x0"]);
        if (parts.size() != 3) throw ConfigError("x0: expected three comma-separated reals");
        cfg.x0 = StateVec{parse_real("x0", parts[0]), parse_real("x0", parts[1]), parse_real("x0", parts[2])};
    }

    if (frac) {
        if (!kv.count("alpha")) throw ConfigError("alpha: required for fractional systems");
        const double a = parse_real("alpha", kv["alpha"]);
        if (!(a > 0 && a <= 1)) throw ConfigError("alpha: must lie in (0, 1]");
        cfg.alpha = a;
    } else {
        forbid(kv, "alpha", "only valid for fractional systems");
    }

    if (cfg.system == "fractional-delay") {
        if (!kv.count("tau")) throw ConfigError("tau: required for fractional-delay (Dirac lag)");
        cfg.tau = positive("tau", parse_real("tau", kv["tau"]));
        if (has_prefix(kv, "kernel."))
            throw ConfigError("kernel: fractional-delay uses a Dirac lag given by 'tau'; kernel.* keys are not accepted");
    } else {
        forbid(kv, "tau", "only valid for fractional-delay (delay systems take kernel.tau)");
        if (delay) {
            cfg.kernel = build_kernel(kv);
        } else if (has_prefix(kv, "kernel.")) {
            throw ConfigError("kernel: only valid for delay systems");
        }
    }

    if (delay) {
        cfg.weights = build_weights(kv);
    } else if (has_prefix(kv, "eps.") || has_prefix(kv, "delta.")) {
        throw ConfigError("eps/delta: only valid for delay systems");
    }

    if (kv.count("mode")) {
        if (cfg.system != "delay-revised" && cfg.system != "fractional-delay")
            throw ConfigError("mode: only valid for delay-revised and fractional-delay");
        if (kv["mode"] == "constructed") cfg.mode = RevisedMode::Constructed;
        else if (kv["mode"] == "literal") cfg.mode = RevisedMode::Literal;
        else throw ConfigError("mode: expected 'constructed' or 'literal'");
    }

    if (kv.count("dt")) cfg.dt = positive("dt", parse_real("dt", kv["dt"]));
    if (kv.count("t_end")) cfg.t_end = positive("t_end", parse_real("t_end", kv["t_end"]));

    if (kv.count("monitors")) {
        for (const auto& name : split_list(kv["monitors"])) {
            if (name != "h1" && name != "c1" && name != "h3")
                throw ConfigError("monitors: unknown monitor '" + name + "' (h1, c1, h3)");
            if (std::find(cfg.monitors.begin(), cfg.monitors.end(), name) != cfg.monitors.end())
                throw ConfigError("monitors: '" + name + "' listed twice");
            cfg.monitors.push_back(name);
        }
    }

    if (kv.count("output.path")) cfg.output_path = kv["output.path"];
    if (kv.count("output.format")) {
        cfg.output_format = kv["output.format"];
        if (cfg.output_format != "csv" && cfg.output_format != "json")
            throw ConfigError("output.format: expected 'csv' or 'json'");
    }
    if (kv.count("seed")) {
        const long s = parse_int("seed", kv["seed"]);
        if (s < 0) throw ConfigError("seed: must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (kv.count("region")) {
        const auto parts = split_list(kv["region"]);
        if (parts.size() != 4) throw ConfigError("region: expected re_min, re_max, im_min, im_max");
        Region r{parse_real("region", parts[0]), parse_real("region", parts[1]), parse_real("region", parts[2]),
                 parse_real("region", parts[3])};
        if (!(r.re_min < r.re_max && r.im_min < r.im_max)) throw ConfigError("region: empty rectangle");
        cfg.region = r;
    }
    if (kv.count("grid")) {
        const long g = parse_int("grid", kv["grid"]);
        if (g < 2 || g > 10000) throw ConfigError("grid: must lie in [2, 10000]");
        cfg.grid = static_cast<int>(g);
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void require_for_simulate(const ScenarioConfig& cfg) {
    if (!cfg.x0) throw ConfigError("x0: required for simulate");
    if (!cfg.dt) throw ConfigError("dt: required for simulate");
    if (!cfg.t_end) throw ConfigError("t_end: required for simulate");
    if (!cfg.output_path) throw ConfigError("output.path: required for simulate");
    step_count(cfg);
}

void require_for_analyze(const ScenarioConfig& cfg, std::string_view target) {
    if (target != "equilibria" && target != "charpoly" && target != "matignon" && target != "roots")
        throw ConfigError("target: expected equilibria, charpoly, matignon or roots");
    if (!cfg.m) throw ConfigError("m: required for analyze");
    if (target == "matignon" && !is_fractional_system(cfg.system))
        throw ConfigError("target: matignon needs a fractional system");
    if (target == "roots") {
        if (!cfg.region) throw ConfigError("region: required for target roots");
        if (!cfg.grid) throw ConfigError("grid: required for target roots");
    }
    const bool explicit_format = std::any_of(cfg.entries.begin(), cfg.entries.end(),
                                             [](const auto& e) { return e.first == "output.format"; });
    if (explicit_format && cfg.output_format != "json")
        throw ConfigError("output.format: analyze reports are written as json");
}

long step_count(const ScenarioConfig& cfg) {
    const double ratio = *cfg.t_end / *cfg.dt;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
        throw ConfigError("t_end: must be a positive integer multiple of dt");
    return n;
}

}  // namespace rabinovich::cli
