#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rabinovich/poisson.hpp"
#include "rabinovich/state.hpp"

namespace rabinovich {

/// Autonomous vector field on R³ with an optional closed-form Jacobian.
struct VectorField {
    std::string id;
    std::function<StateVec(const StateVec&)> eval;
    std::function<Mat3(const StateVec&)> analytic_jacobian;  // empty if unavailable

    StateVec operator()(const StateVec& x) const { return eval(x); }
};

/// Quadratic monitor evaluated along trajectories.
struct Monitor {
    std::string name;
    QuadraticFn fn;
};

/// Uniform time grid with states and per-state monitor values.
class Trajectory {
public:
    Trajectory(double t0, double dt, std::vector<StateVec> states,
               std::vector<std::pair<std::string, std::vector<double>>> monitors = {});

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    double time(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }
    std::size_t size() const { return states_.size(); }

    const std::vector<StateVec>& states() const { return states_; }
    const StateVec& state(std::size_t i) const { return states_.at(i); }
    const StateVec& back() const { return states_.back(); }

    const std::vector<std::pair<std::string, std::vector<double>>>& monitors() const {
        return monitors_;
    }
    /// Throws std::out_of_range for an unknown monitor name.
    const std::vector<double>& monitor(std::string_view name) const;

    void add_monitor(std::string name, std::vector<double> values);

private:
    double t0_;
    double dt_;
    std::vector<StateVec> states_;
    std::vector<std::pair<std::string, std::vector<double>>> monitors_;
};

enum class EquilibriumKind { E1, E2, E3 };

struct EquilibriumFamily {
    EquilibriumKind kind = EquilibriumKind::E1;
    double m = 0.0;
};

const char* to_string(EquilibriumKind k);

enum class JacobianMode { Analytic, FiniteDifference };

/// (x2 x3, −x1 x3, x1 x2). Throws DomainError for non-finite input.
StateVec rabinovich_field(const StateVec& x);
Mat3 rabinovich_jacobian(const StateVec& x);

/// E1 → (m,0,0), E2 → (0,m,0), E3 → (0,0,m).
StateVec equilibrium_point(const EquilibriumFamily& fam);

/// Built-in fields: "classical", "literal38", "literal10",
/// "metriplectic-first", "metriplectic-second",
/// "metriplectic-second-sym", "metriplectic-second-table".
/// Throws DomainError for unknown ids.
VectorField builtin_field(std::string_view id);
std::vector<std::string> builtin_field_ids();

/// Central differences use h = h_fd if given, else 1e-6·max(1, |x|).
Mat3 jacobian(const VectorField& field, const StateVec& x, JacobianMode mode,
              std::optional<double> h_fd = std::nullopt);

/// Fixed-step classical RK4. Stores n_steps + 1 states.
Trajectory integrate_rk4(const VectorField& field, const StateVec& x0, double dt, long n_steps,
                         const std::vector<Monitor>& monitors = {});

struct SignTriple {
    int s1, s2, s3;
    friend bool operator==(const SignTriple&, const SignTriple&) = default;
};

/// Sign triples for which (s1 m sech(mt), s2 m tanh(mt), s3 m sech(mt))
/// solves the classical system, derived by matching the sign of each
/// monomial coefficient on both sides of the equations.
const std::vector<SignTriple>& valid_heteroclinic_signs();

StateVec heteroclinic_orbit(double m, SignTriple signs, double t);
/// d/dt of the closed form.
StateVec heteroclinic_velocity(double m, SignTriple signs, double t);

/// Small-oscillation period near an E1 point from upward zero crossings of x3,
/// located by linear interpolation. Throws DomainError if fewer than two
/// crossings occur before T.
double measure_period(const StateVec& x0, double dt, double t_end);

}  // namespace rabinovich
