#include "rabinovich/core_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rabinovich/metriplectic.hpp"

namespace rabinovich {

// ---- Trajectory -------------------------------------------------------------

Trajectory::Trajectory(double t0, double dt, std::vector<StateVec> states,
                       std::vector<std::pair<std::string, std::vector<double>>> monitors)
    : t0_(t0), dt_(dt), states_(std::move(states)) {
    if (!(dt_ > 0.0)) throw DomainError("Trajectory: dt must be positive");
    if (states_.empty()) throw DomainError("Trajectory: no states");
    for (auto& [name, values] : monitors) add_monitor(std::move(name), std::move(values));
}

const std::vector<double>& Trajectory::monitor(std::string_view name) const {
    for (const auto& [n, v] : monitors_)
        if (n == name) return v;
    throw std::out_of_range("Trajectory: no monitor named '" + std::string(name) + "'");
}

void Trajectory::add_monitor(std::string name, std::vector<double> values) {
    if (values.size() != states_.size())
        throw DomainError("Trajectory: monitor '" + name + "' length differs from state count");
    monitors_.emplace_back(std::move(name), std::move(values));
}

// ---- Classical field --------------------------------------------------------

const char* to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::E1: return "E1";
        case EquilibriumKind::E2: return "E2";
        case EquilibriumKind::E3: return "E3";
    }
    return "?";
}

StateVec rabinovich_field(const StateVec& x) {
    require_finite(x, "rabinovich_field");
    return {x[1] * x[2], -x[0] * x[2], x[0] * x[1]};
}

Mat3 rabinovich_jacobian(const StateVec& x) {
    Mat3 j;
    j(0, 1) = x[2];
    j(0, 2) = x[1];
    j(1, 0) = -x[2];
    j(1, 2) = -x[0];
    j(2, 0) = x[1];
    j(2, 1) = x[0];
    return j;
}

StateVec equilibrium_point(const EquilibriumFamily& fam) {
    switch (fam.kind) {
        case EquilibriumKind::E1: return {fam.m, 0.0, 0.0};
        case EquilibriumKind::E2: return {0.0, fam.m, 0.0};
        case EquilibriumKind::E3: return {0.0, 0.0, fam.m};
    }
    return {};
}

std::vector<std::string> builtin_field_ids() {
    return {"classical",           "literal38",          "literal10",
            "metriplectic-first",  "metriplectic-second", "metriplectic-second-sym",
            "metriplectic-second-table"};
}

VectorField builtin_field(std::string_view id) {
    auto checked = [](auto f) {
        return [f](const StateVec& x) {
            require_finite(x, "vector field");
            return f(x);
        };
    };
    if (id == "classical") return {std::string(id), rabinovich_field, rabinovich_jacobian};
    if (id == "literal38")
        return {std::string(id), checked(literal_system_38), literal_system_38_jacobian};
    if (id == "literal10")
        return {std::string(id), checked(literal_system_10), literal_system_10_jacobian};

    auto metriplectic = [&](MetriplecticSystem sys, bool analytic) {
        VectorField f;
        f.id = std::string(id);
        f.eval = checked([sys](const StateVec& x) { return metriplectic_field(sys, x); });
        if (analytic) f.analytic_jacobian = [sys](const StateVec& x) { return metriplectic_jacobian(sys, x); };
        return f;
    };
    if (id == "metriplectic-first") return metriplectic(first_kind_system(), true);
    if (id == "metriplectic-second") return metriplectic(second_kind_system(MetricKind::SecondKind), true);
    if (id == "metriplectic-second-sym")
        return metriplectic(second_kind_system(MetricKind::SecondKindSymmetric), true);
    if (id == "metriplectic-second-table")
        return metriplectic(second_kind_system(MetricKind::TableSecond10), false);
    throw DomainError("unknown vector field '" + std::string(id) + "'");
}

Mat3 jacobian(const VectorField& field, const StateVec& x, JacobianMode mode, std::optional<double> h_fd) {
    require_finite(x, "jacobian");
    if (mode == JacobianMode::Analytic) {
        if (!field.analytic_jacobian)
            throw DomainError("field '" + field.id + "' has no analytic Jacobian");
        Mat3 j = field.analytic_jacobian(x);
        if (!j.finite()) throw DomainError("jacobian: non-finite entry");
        return j;
    }
    const double h = h_fd.value_or(1e-6 * std::max(1.0, norm(x)));
    if (!(h > 0.0)) throw DomainError("jacobian: finite-difference step must be positive");
    Mat3 j;
    for (std::size_t c = 0; c < 3; ++c) {
        StateVec xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const StateVec fp = field(xp);
        const StateVec fm = field(xm);
        if (!fp.finite() || !fm.finite()) throw DomainError("jacobian: non-finite field evaluation");
        for (std::size_t r = 0; r < 3; ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
    }
    return j;
}

// ---- RK4 ----------------------------------------------------------------------

Trajectory integrate_rk4(const VectorField& field, const StateVec& x0, double dt, long n_steps,
                         const std::vector<Monitor>& monitors) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate_rk4: dt must be positive");
    if (n_steps < 1) throw DomainError("integrate_rk4: n_steps must be >= 1");
    require_finite(x0, "integrate_rk4 initial state");

    std::vector<StateVec> states;
    states.reserve(static_cast<std::size_t>(n_steps) + 1);
    states.push_back(x0);
    StateVec x = x0;
    for (long n = 0; n < n_steps; ++n) {
        try {
            const StateVec k1 = field(x);
            const StateVec k2 = field(x + (0.5 * dt) * k1);
            const StateVec k3 = field(x + (0.5 * dt) * k2);
            const StateVec k4 = field(x + dt * k3);
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } catch (const DomainError& e) {
            throw NumericalError(std::string("integrate_rk4: ") + e.what(), n + 1);
        }
        if (!x.finite()) throw NumericalError("integrate_rk4: state became non-finite", n + 1);
        states.push_back(x);
    }

    Trajectory traj(0.0, dt, std::move(states));
    for (const auto& m : monitors) {
        std::vector<double> values;
        values.reserve(traj.size());
        for (const auto& s : traj.states()) values.push_back(m.fn(s));
        traj.add_monitor(m.name, std::move(values));
    }
    return traj;
}

// ---- Heteroclinic orbits -----------------------------------------------------

const std::vector<SignTriple>& valid_heteroclinic_signs() {
    // With x = (s1 m sech, s2 m tanh, s3 m sech) and u = mt, each equation
    // reduces to one monomial on each side:
    //   ẋ1 = −s1 m² sech·tanh   vs  x2 x3 =  s2 s3 m² tanh·sech   ⇒ −s1 = s2 s3
    //   ẋ2 =  s2 m² sech²       vs −x1 x3 = −s1 s3 m² sech²       ⇒  s2 = −s1 s3
    //   ẋ3 = −s3 m² sech·tanh   vs  x1 x2 =  s1 s2 m² sech·tanh   ⇒ −s3 = s1 s2
    static const std::vector<SignTriple> valid = [] {
        std::vector<SignTriple> out;
        for (int s1 : {1, -1})
            for (int s2 : {1, -1})
                for (int s3 : {1, -1})
                    if (-s1 == s2 * s3 && s2 == -s1 * s3 && -s3 == s1 * s2) out.push_back({s1, s2, s3});
        return out;
    }();
    return valid;
}

namespace {
void check_orbit_args(double m, SignTriple s) {
    if (m == 0.0 || !std::isfinite(m)) throw DomainError("heteroclinic_orbit: m must be finite and nonzero");
    const auto& valid = valid_heteroclinic_signs();
    if (std::find(valid.begin(), valid.end(), s) == valid.end()) {
        std::string msg = "heteroclinic_orbit: invalid sign triple; valid triples are";
        for (const auto& v : valid)
            msg += " (" + std::to_string(v.s1) + "," + std::to_string(v.s2) + "," + std::to_string(v.s3) + ")";
        throw DomainError(msg);
    }
}
}  // namespace

StateVec heteroclinic_orbit(double m, SignTriple s, double t) {
    check_orbit_args(m, s);
    const double sech = 1.0 / std::cosh(m * t);
    const double th = std::tanh(m * t);
    return {s.s1 * m * sech, s.s2 * m * th, s.s3 * m * sech};
}

StateVec heteroclinic_velocity(double m, SignTriple s, double t) {
    check_orbit_args(m, s);
    const double sech = 1.0 / std::cosh(m * t);
    const double th = std::tanh(m * t);
    return {-s.s1 * m * m * sech * th, s.s2 * m * m * sech * sech, -s.s3 * m * m * sech * th};
}

// ---- Period ---------------------------------------------------------------------

double measure_period(const StateVec& x0, double dt, double t_end) {
    require_finite(x0, "measure_period");
    if (x0[0] == 0.0) throw DomainError("measure_period: x0 must lie near an E1 point with m != 0");
    if (!(dt > 0.0) || !(t_end > dt)) throw DomainError("measure_period: need 0 < dt < T");

    const long n = std::lround(t_end / dt);
    const Trajectory traj = integrate_rk4(builtin_field("classical"), x0, dt, n);

    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        const double a = traj.state(i)[2];
        const double b = traj.state(i + 1)[2];
        if (a < 0.0 && b >= 0.0) crossings.push_back(traj.time(i) + dt * (-a) / (b - a));
    }
    if (crossings.size() < 2)
        throw DomainError("measure_period: fewer than two zero crossings of x3 before T");
    return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

}  // namespace rabinovich
