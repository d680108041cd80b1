#pragma once

// Poisson tensors with entries linear in (x, x̃), quadratic functions over the
// same six coordinates, and the bracket calculus built on them.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rabinovich/state.hpp"

namespace rabinovich {

/// Coefficients over the six coordinates (x1, x2, x3, x̃1, x̃2, x̃3).
using Coeff6 = std::array<double, 6>;
using Mat6 = std::array<std::array<double, 6>, 6>;

/// Polynomial of degree <= 2 in (x, x̃):
///     f(x, x̃) = ½ zᵀ Q z + bᵀ z + c,   z = (x, x̃),  Q symmetric.
/// The ½ is part of the stored convention, so Q is the Hessian and gradients
/// are the exact affine maps Q z + b.
class QuadraticFn {
public:
    QuadraticFn() = default;

    /// Throws DomainError if Q is not symmetric.
    static QuadraticFn from_matrix(const Mat6& q, const Coeff6& linear = {}, double constant = 0.0);
    /// The coordinate function z_i (i in 0..5).
    static QuadraticFn coordinate(std::size_t i);
    /// The product z_i z_j.
    static QuadraticFn product(std::size_t i, std::size_t j);
    /// ½ Σ d_k x_k² over the non-delayed coordinates.
    static QuadraticFn diagonal(double d1, double d2, double d3);

    double operator()(const StateVec& x, const StateVec& xt = {}) const;

    StateVec grad_x(const StateVec& x, const StateVec& xt = {}) const;
    StateVec grad_xt(const StateVec& x, const StateVec& xt = {}) const;

    /// ∂²f/∂x∂x (the upper-left 3x3 block of Q).
    Mat3 hessian_x() const;

    bool uses_delay() const;

    const Mat6& matrix() const { return q_; }
    const Coeff6& linear() const { return b_; }
    double constant() const { return c_; }

    QuadraticFn& operator+=(const QuadraticFn& o);
    QuadraticFn& operator*=(double s);
    friend QuadraticFn operator+(QuadraticFn a, const QuadraticFn& b) { return a += b; }
    friend QuadraticFn operator-(QuadraticFn a, const QuadraticFn& b) { return a += b * -1.0; }
    friend QuadraticFn operator*(QuadraticFn a, double s) { return a *= s; }
    friend QuadraticFn operator*(double s, QuadraticFn a) { return a *= s; }

private:
    std::array<double, 6> z_grad(const StateVec& x, const StateVec& xt) const;

    Mat6 q_{};
    Coeff6 b_{};
    double c_ = 0.0;
};

/// Skew 3x3 tensor field whose entries are linear forms in (x, x̃).
/// Skew-symmetry holds by construction: only the upper triangle is stored.
class PoissonTensor {
public:
    PoissonTensor() = default;
    static PoissonTensor from_upper(const Coeff6& p12, const Coeff6& p13, const Coeff6& p23);

    /// Linear form of entry (i, j); the diagonal is identically zero.
    Coeff6 entry(std::size_t i, std::size_t j) const;

    /// Evaluates at x. Throws DomainError if the tensor references x̃.
    Mat3 eval(const StateVec& x) const;
    Mat3 eval(const StateVec& x, const StateVec& xt) const;

    /// ∂P/∂x_m, a constant skew matrix.
    Mat3 derivative_x(std::size_t m) const;

    bool uses_delay() const;

    PoissonTensor& operator+=(const PoissonTensor& o);
    PoissonTensor& operator*=(double s);
    friend PoissonTensor operator+(PoissonTensor a, const PoissonTensor& b) { return a += b; }
    friend PoissonTensor operator*(PoissonTensor a, double s) { return a *= s; }
    friend PoissonTensor operator*(double s, PoissonTensor a) { return a *= s; }

private:
    Coeff6 u12_{}, u13_{}, u23_{};
};

/// Parameters of the pencil α P¹ + β P² + γ P³ (α ≠ 0).
struct PoissonPencil {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;

    /// Throws DomainError if alpha == 0 or a parameter is not finite.
    void validate() const;
};

// The three realizations of the classical system.
PoissonTensor tensor_p1();
PoissonTensor tensor_p2();
PoissonTensor tensor_p3();
PoissonTensor pencil_tensor(const PoissonPencil& p);

// Hamiltonians paired with P¹, P², P³.
QuadraticFn ham_h1();  // ½(x1² + x2²)
QuadraticFn ham_h2();  // x2² + x3²
QuadraticFn ham_h3();  // x1² − x3²
/// (1/2α)(x1² + x2²).
QuadraticFn pencil_hamiltonian(const PoissonPencil& p);

// Casimirs.
QuadraticFn casimir_c1();  // ½(x2² + x3²)
QuadraticFn casimir_c2();  // x1² + x2²
QuadraticFn casimir_c3();  // x1² + x2²
QuadraticFn pencil_casimir(const PoissonPencil& p);

/// The alternative pairing listed alongside the metric constructions:
/// h = ½(x1² + x2²), c = ½(x2² + x3²) for all three tensors.
QuadraticFn alt_hamiltonian();
QuadraticFn alt_casimir();

/// x1² − x3², conserved by the classical flow.
inline QuadraticFn plane_invariant() { return ham_h3(); }

/// Looks up h1, h2, h3, c1, c2, c3 by name. Throws DomainError otherwise.
QuadraticFn quadratic_by_name(std::string_view name);

Mat3 tensor_eval(const PoissonTensor& p, const StateVec& x);
Mat3 tensor_eval(const PoissonTensor& p, const StateVec& x, const StateVec& xt);

/// {f, g}(x) = ∇f(x)ᵀ P(x) ∇g(x), gradients taken in x with x̃ held fixed.
/// Omitting x̃ is an error when P or a function references it.
double bracket(const PoissonTensor& p, const QuadraticFn& f, const QuadraticFn& g,
               const StateVec& x, const std::optional<StateVec>& xt = std::nullopt);

/// Exact gradient in x of {f, g}.
StateVec bracket_gradient(const PoissonTensor& p, const QuadraticFn& f, const QuadraticFn& g,
                          const StateVec& x, const std::optional<StateVec>& xt = std::nullopt);

/// {f,{g,h}} + {g,{h,f}} + {h,{f,g}} at x, using exact inner gradients.
double jacobi_residual(const PoissonTensor& p, const QuadraticFn& f, const QuadraticFn& g,
                       const QuadraticFn& h, const StateVec& x, const std::optional<StateVec>& xt = std::nullopt);

/// P(x) ∇c(x); zero exactly where c is a Casimir.
StateVec casimir_residual(const PoissonTensor& p, const QuadraticFn& c, const StateVec& x,
                          const std::optional<StateVec>& xt = std::nullopt);

/// P(x) ∇h(x).
StateVec hamiltonian_field(const PoissonTensor& p, const QuadraticFn& h, const StateVec& x,
                           const std::optional<StateVec>& xt = std::nullopt);

/// Largest pairwise sup-norm gap among P¹∇h₁, P²∇h₂, P³∇h₃ and the classical field.
double tri_hamiltonian_gap(const StateVec& x);

}  // namespace rabinovich
