#pragma once

// Distributed-delay kernels, delayed-state evaluation, the blended delay
// Hamiltonian systems and their integration.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rabinovich/core_dynamics.hpp"
#include "rabinovich/poisson.hpp"

namespace rabinovich {

namespace kernel {
/// Density 1/τ on [a, a+τ].
struct Uniform {
    double a = 0.0;
    double tau = 1.0;
};
/// α e^{−αs}.
struct Exponential {
    double alpha = 1.0;
};
/// α² s e^{−αs}.
struct Erlang {
    double alpha = 1.0;
};
/// δ(s − τ).
struct Dirac {
    double tau = 1.0;
};
}  // namespace kernel

class Kernel {
public:
    using Variant = std::variant<kernel::Uniform, kernel::Exponential, kernel::Erlang, kernel::Dirac>;

    /// Throws DomainError on invalid parameters.
    Kernel(Variant v);

    static Kernel uniform(double a, double tau) { return Kernel(kernel::Uniform{a, tau}); }
    static Kernel exponential(double alpha) { return Kernel(kernel::Exponential{alpha}); }
    static Kernel erlang(double alpha) { return Kernel(kernel::Erlang{alpha}); }
    static Kernel dirac(double tau) { return Kernel(kernel::Dirac{tau}); }

    const Variant& variant() const { return v_; }
    bool is_dirac() const { return std::holds_alternative<kernel::Dirac>(v_); }
    std::string describe() const;

    /// [lo, hi] outside which the density vanishes or its tail mass is below
    /// `tail` (exponential and Erlang).
    std::pair<double, double> support(double tail = 1e-10) const;

private:
    Variant v_;
};

/// Density at s >= 0. Dirac kernels reject pointwise queries.
double kernel_density(const Kernel& k, double s);

/// ∫₀^∞ k(s) e^{−λs} ds in closed form. Throws DomainError where the integral
/// diverges (Re λ <= −α for exponential and Erlang).
std::complex<double> kernel_laplace(const Kernel& k, std::complex<double> lambda);

/// Blend weights ε (tensor) and δ (Hamiltonian), each on the probability simplex.
class BlendWeights {
public:
    /// Throws DomainError if a vector leaves the simplex (tolerance 1e-12).
    BlendWeights(std::array<double, 4> eps, std::array<double, 4> delta);

    static BlendWeights no_delay() { return BlendWeights({1, 0, 0, 0}, {1, 0, 0, 0}); }

    const std::array<double, 4>& eps() const { return eps_; }
    const std::array<double, 4>& delta() const { return delta_; }

    // α₁ = ε₀+ε₁, α₂ = ε₀+ε₂, α₃ = ε₁+ε₂, α₄ = ε₁+ε₃, α₅ = ε₂+ε₃.
    double a1() const { return eps_[0] + eps_[1]; }
    double a2() const { return eps_[0] + eps_[2]; }
    double a3() const { return eps_[1] + eps_[2]; }
    double a4() const { return eps_[1] + eps_[3]; }
    double a5() const { return eps_[2] + eps_[3]; }
    // β₁ = δ₀+δ₁, β₂ = δ₀+δ₂, β₃ = δ₁+δ₃, β₄ = δ₂+δ₃.
    double b1() const { return delta_[0] + delta_[1]; }
    double b2() const { return delta_[0] + delta_[2]; }
    double b3() const { return delta_[1] + delta_[3]; }
    double b4() const { return delta_[2] + delta_[3]; }

private:
    std::array<double, 4> eps_;
    std::array<double, 4> delta_;
};

// Building blocks P₀..P₃, h₀..h₃, l₀..l₃ over (x, x̃).
PoissonTensor delay_tensor(int i);
QuadraticFn delay_hamiltonian(int i);
QuadraticFn delay_casimir(int i);

/// Σ εᵢ Pᵢ.
PoissonTensor blended_tensor(const BlendWeights& w);
/// Σ δᵢ hᵢ.
QuadraticFn blended_hamiltonian(const BlendWeights& w);
/// Σ εᵢ lᵢ.
QuadraticFn blended_casimir(const BlendWeights& w);

/// Initial function φ on (−∞, 0] plus the samples accumulated while integrating.
class History {
public:
    enum class Interpolation { Linear, Cubic };

    struct Sample {
        double t;
        StateVec x;
        std::optional<StateVec> dxdt;
    };

    static History constant(const StateVec& x0);
    static History function(std::function<StateVec(double)> phi);
    /// Samples of φ on [t_first, t_last] (t_last <= 0); queries before t_first fail.
    static History sampled(std::vector<Sample> samples);

    /// Appends an integration node; timestamps must increase strictly and
    /// start at t >= 0.
    void append(double t, const StateVec& x, std::optional<StateVec> dxdt = std::nullopt);

    /// x(t). Throws DomainError when t lies outside the covered range.
    StateVec at(double t) const;

    /// Earliest time for which at() succeeds (−∞ for constant/function φ).
    double earliest() const;
    /// Latest covered time (0 before any node is appended).
    double latest() const;

    void set_interpolation(Interpolation mode) { interp_ = mode; }
    Interpolation interpolation() const { return interp_; }

    const std::vector<Sample>& buffer() const { return buffer_; }

    /// φ only, ignoring the buffer.
    StateVec initial(double t) const;

    /// The value of φ when it was built by constant().
    const std::optional<StateVec>& constant_value() const { return constant_; }

private:
    static StateVec interpolate(const std::vector<Sample>& s, std::size_t i, double t,
                                Interpolation mode);

    std::function<StateVec(double)> phi_;
    std::optional<StateVec> constant_;
    std::vector<Sample> phi_samples_;
    std::vector<Sample> buffer_;
    Interpolation interp_ = Interpolation::Cubic;
};

/// x̃(t) = ∫₀^∞ k(s) x(t − s) ds evaluated from the history by quadrature
/// (Dirac: interpolated lookup of x(t − τ)).
StateVec delayed_state(const History& hist, const Kernel& k, double t);

/// Field of the form ẋ = X(x, x̃).
using DelayField = std::function<StateVec(const StateVec& x, const StateVec& xt)>;

/// P(x̃,x) ∇ₓh(x̃,x) with P = Σεᵢ Pᵢ and h = Σδᵢ hᵢ.
StateVec delay_hamiltonian_field(const StateVec& x, const StateVec& xt, const BlendWeights& w);

enum class RevisedMode { Constructed, Literal };

/// Constructed: delay Hamiltonian field + g(x̃,x) ∇_x̃ l(x̃,x) with g the
/// first-kind metric of ∇ₓh. Literal: the printed right-hand side verbatim.
StateVec revised_delay_field(const StateVec& x, const StateVec& xt, const BlendWeights& w,
                             RevisedMode mode = RevisedMode::Constructed);

/// A = ∂X/∂x and B = ∂X/∂x̃ at (x0, x̃ = x0) by central differences.
std::pair<Mat3, Mat3> linearize_delay_field(const DelayField& f, const StateVec& x0);

/// Integrates ẋ = X(x, x̃) on [0, T] with fixed step dt. The returned
/// trajectory carries monitors "xt1", "xt2", "xt3" holding x̃ at each node,
/// plus the requested quadratic monitors. On return `hist` (if given)
/// holds the computed solution.
Trajectory integrate_dde(const DelayField& field, const Kernel& k, const History& phi, double dt,
                         double t_end, const std::vector<Monitor>& monitors = {},
                         History* hist_out = nullptr);

}  // namespace rabinovich
