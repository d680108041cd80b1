#pragma once

#include <array>
#include <string>
#include <vector>

#include "rabinovich/core_dynamics.hpp"
#include "rabinovich/poisson.hpp"

namespace rabinovich {

/// How the metric leg g(x) is obtained.
enum class MetricKind {
    FirstKind,            // g built from ∇h alone
    SecondKind,           // g built from ∇h and ∇c, as written (non-symmetric)
    SecondKindSymmetric,  // ½(g + gᵀ) of the second-kind construction
    TableFirst38,         // printed g-table of the first-kind literal system
    TableSecond10,        // printed g-table of the second-kind literal system
};

const char* to_string(MetricKind k);

/// g_ii = −Σ_{k≠i} (∂h/∂x_k)²,  g_ij = ∂h/∂x_i ∂h/∂x_j.
Mat3 build_metric_first_kind(const QuadraticFn& h, const StateVec& x);

/// g_ii = −Σ_{k≠i} ∂h/∂x_k ∂c/∂x_k,  g_ij = ∂h/∂x_i ∂c/∂x_j.
Mat3 build_metric_second_kind(const QuadraticFn& h, const QuadraticFn& c, const StateVec& x);

/// The g-components listed for the first-kind realization of (P¹, h₁).
Mat3 metric_table_38(const StateVec& x);
/// The g-components listed for the second-kind realization of (P¹, h₁, c₁).
Mat3 metric_table_10(const StateVec& x);

struct MetriplecticSystem {
    PoissonTensor poisson;
    MetricKind metric = MetricKind::FirstKind;
    QuadraticFn hamiltonian;
    QuadraticFn metric_leg;  // equals the Hamiltonian for first kind, the Casimir for second kind

    /// Metric tensor at x.
    Mat3 metric_at(const StateVec& x) const;
};

/// (P¹, h₁) with the formula-built first-kind metric.
MetriplecticSystem first_kind_system();
/// (P¹, h₁, c₁) with the chosen second-kind metric variant.
MetriplecticSystem second_kind_system(MetricKind kind = MetricKind::SecondKind);

/// P(x)∇h(x) + g(x)∇(metric leg)(x).
StateVec metriplectic_field(const MetriplecticSystem& sys, const StateVec& x);

/// Closed-form Jacobian of metriplectic_field for the formula-built metrics.
Mat3 metriplectic_jacobian(const MetriplecticSystem& sys, const StateVec& x);

/// Right-hand side printed for the first-kind revised system.
StateVec literal_system_38(const StateVec& x);
Mat3 literal_system_38_jacobian(const StateVec& x);

/// Right-hand side printed for the second-kind revised system.
StateVec literal_system_10(const StateVec& x);
Mat3 literal_system_10_jacobian(const StateVec& x);

/// Monic cubic λ³ + c[2]λ² + c[1]λ + c[0], stored low-to-high as {c0, c1, c2, 1}.
using Cubic = std::array<double, 4>;

/// det(λI − J).
Cubic characteristic_polynomial(const Mat3& j);

/// Error carrying the field residual at a non-stationary point.
class NotStationaryError : public DomainError {
public:
    NotStationaryError(const std::string& what, StateVec residual)
        : DomainError(what), residual_(residual) {}
    const StateVec& residual() const { return residual_; }

private:
    StateVec residual_;
};

/// Characteristic polynomial of the analytic Jacobian at the family point.
/// Throws NotStationaryError if the point is not an equilibrium of the field.
Cubic char_poly_at_equilibrium(const VectorField& field, const EquilibriumFamily& fam);

/// Printed characteristic polynomials, normalized to monic form, for
/// comparison against the computed ones. Indexed by system id
/// ("literal38", "literal10") and family.
/// Returns false when nothing is printed for the combination.
bool printed_char_poly(std::string_view system, const EquilibriumFamily& fam, Cubic& out);

/// Printed linear-part matrices A₁, A₂, A₃ for the two literal systems.
bool printed_linear_part(std::string_view system, const EquilibriumFamily& fam, Mat3& out);

}  // namespace rabinovich
