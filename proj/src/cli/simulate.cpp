#include <cstdio>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "rabinovich/cli/commands.hpp"
#include "rabinovich/fractional.hpp"

namespace rabinovich::cli {

namespace {

Monitor monitor_by_name(const std::string& name) {
    if (name == "h1") return {name, ham_h1()};
    if (name == "c1") return {name, casimir_c1()};
    if (name == "h3") return {name, plane_invariant()};
    throw ConfigError("monitors: unknown monitor '" + name + "'");
}

DelayField delay_field(const ScenarioConfig& cfg) {
    const BlendWeights w = *cfg.weights;
    const RevisedMode mode = cfg.mode;
    if (cfg.system == "delay")
        return [w](const StateVec& x, const StateVec& xt) { return delay_hamiltonian_field(x, xt, w); };
    if (cfg.system == "delay-revised")
        return [w, mode](const StateVec& x, const StateVec& xt) { return revised_delay_field(x, xt, w, mode); };
    return [w, mode](const StateVec& x, const StateVec& xt) { return fractional_field_500(x, xt, w, mode); };
}

nlohmann::json echo_value(const std::string& v) {
    double x = 0;
    char* end = nullptr;
    x = std::strtod(v.c_str(), &end);
    if (end && *end == '\0' && !v.empty()) return x;
    if (v.find(',') != std::string::npos) {
        nlohmann::json arr = nlohmann::json::array();
        std::string body = v;
        if (!body.empty() && (body.front() == '(' || body.front() == '[')) body = body.substr(1, body.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
            item = b == std::string::npos ? "" : item.substr(b, e - b + 1);
            const double d = std::strtod(item.c_str(), &end);
            if (end && *end == '\0' && !item.empty()) arr.push_back(d);
            else arr.push_back(item);
        }
        return arr;
    }
    return v;
}

}  // namespace

Trajectory simulate(const ScenarioConfig& cfg) {
    require_for_simulate(cfg);
    const long n = step_count(cfg);
    const double dt = *cfg.dt;
    std::vector<Monitor> monitors;
    for (const auto& name : cfg.monitors) monitors.push_back(monitor_by_name(name));
    const StateVec x0 = *cfg.x0;

    if (cfg.system == "fractional")
        return integrate_abm(builtin_field("classical"), x0, FracOrder(*cfg.alpha), dt, n, monitors).traj;
    if (cfg.system == "fractional-delay")
        return integrate_abm_delay(delay_field(cfg), History::constant(x0), *cfg.tau, x0, FracOrder(*cfg.alpha), dt,
                                   n, monitors)
            .traj;
    if (is_delay_system(cfg.system))
        return integrate_dde(delay_field(cfg), *cfg.kernel, History::constant(x0), dt, static_cast<double>(n) * dt,
                             monitors);
    return integrate_rk4(builtin_field(cfg.system), x0, dt, n, monitors);
}

Trajectory run_simulate(const ScenarioConfig& cfg) {
    const Trajectory tr = simulate(cfg);
    std::ofstream out(*cfg.output_path, std::ios::binary);
    if (!out) throw ConfigError("output.path: cannot write '" + *cfg.output_path + "'");
    if (cfg.output_format == "json") write_trajectory_json(out, tr, cfg.monitors, cfg);
    else write_trajectory_csv(out, tr, cfg.monitors);
    if (!out) throw ConfigError("output.path: write failed for '" + *cfg.output_path + "'");
    return tr;
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& monitors) {
    out << "t,x1,x2,x3";
    for (const auto& m : monitors) out << ',' << m;
    out << '\n';
    std::vector<const std::vector<double>*> cols;
    for (const auto& m : monitors) cols.push_back(&tr.monitor(m));
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const StateVec& x = tr.states()[i];
        out << format_real(tr.time(i)) << ',' << format_real(x[0]) << ',' << format_real(x[1]) << ','
            << format_real(x[2]);
        for (const auto* c : cols) out << ',' << format_real((*c)[i]);
        out << '\n';
    }
}

void write_trajectory_json(std::ostream& out, const Trajectory& tr, const std::vector<std::string>& monitors,
                           const ScenarioConfig& cfg) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.entries) meta[k] = echo_value(v);
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    std::vector<double> t(tr.size()), c[3];
    for (auto& col : c) col.resize(tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        t[i] = tr.time(i);
        for (std::size_t k = 0; k < 3; ++k) c[k][i] = tr.states()[i][k];
    }
    data["t"] = t;
    data["x1"] = c[0];
    data["x2"] = c[1];
    data["x3"] = c[2];
    for (const auto& m : monitors) data[m] = tr.monitor(m);
    nlohmann::ordered_json doc;
    doc["meta"] = meta;
    doc["data"] = data;
    out << doc.dump() << '\n';
}

}  // namespace rabinovich::cli
