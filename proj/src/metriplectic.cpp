#include "rabinovich/metriplectic.hpp"

#include <cmath>
#include <cstdio>

namespace rabinovich {

const char* to_string(MetricKind k) {
    switch (k) {
        case MetricKind::FirstKind: return "first-kind";
        case MetricKind::SecondKind: return "second-kind";
        case MetricKind::SecondKindSymmetric: return "second-kind-symmetrized";
        case MetricKind::TableFirst38: return "table-38";
        case MetricKind::TableSecond10: return "table-10";
    }
    return "?";
}

namespace {

// g_ii = −Σ_{k≠i} a_k b_k, g_ij = a_i b_j.
Mat3 metric_from_gradients(const StateVec& a, const StateVec& b) {
    Mat3 g = outer(a, b);
    const double ab = dot(a, b);
    for (std::size_t i = 0; i < 3; ++i) g(i, i) = -(ab - a[i] * b[i]);
    return g;
}

}  // namespace

Mat3 build_metric_first_kind(const QuadraticFn& h, const StateVec& x) {
    const StateVec a = h.grad_x(x);
    return metric_from_gradients(a, a);
}

Mat3 build_metric_second_kind(const QuadraticFn& h, const QuadraticFn& c, const StateVec& x) {
    return metric_from_gradients(h.grad_x(x), c.grad_x(x));
}

Mat3 metric_table_38(const StateVec& x) {
    Mat3 g;
    g(0, 0) = -x[1] * x[1];
    g(1, 1) = -x[0] * x[0];
    g(0, 1) = g(1, 0) = x[0] * x[1];
    return g;
}

Mat3 metric_table_10(const StateVec& x) {
    Mat3 g;
    g(0, 0) = -x[1] * x[1];
    g(0, 1) = x[0] * x[1];
    g(0, 2) = x[0] * x[2];
    g(1, 2) = x[1] * x[2];
    return g;
}

Mat3 MetriplecticSystem::metric_at(const StateVec& x) const {
    switch (metric) {
        case MetricKind::FirstKind: return build_metric_first_kind(metric_leg, x);
        case MetricKind::SecondKind: return build_metric_second_kind(hamiltonian, metric_leg, x);
        case MetricKind::SecondKindSymmetric: {
            const Mat3 g = build_metric_second_kind(hamiltonian, metric_leg, x);
            return 0.5 * (g + g.transpose());
        }
        case MetricKind::TableFirst38: return metric_table_38(x);
        case MetricKind::TableSecond10: return metric_table_10(x);
    }
    return {};
}

MetriplecticSystem first_kind_system() {
    return {tensor_p1(), MetricKind::FirstKind, ham_h1(), ham_h1()};
}

MetriplecticSystem second_kind_system(MetricKind kind) {
    if (kind == MetricKind::FirstKind || kind == MetricKind::TableFirst38)
        throw DomainError("second_kind_system: metric kind is a first-kind construction");
    return {tensor_p1(), kind, ham_h1(), casimir_c1()};
}

StateVec metriplectic_field(const MetriplecticSystem& sys, const StateVec& x) {
    require_finite(x, "metriplectic_field");
    return sys.poisson.eval(x) * sys.hamiltonian.grad_x(x) + sys.metric_at(x) * sys.metric_leg.grad_x(x);
}

Mat3 metriplectic_jacobian(const MetriplecticSystem& sys, const StateVec& x) {
    const StateVec dh = sys.hamiltonian.grad_x(x);
    const Mat3 hh = sys.hamiltonian.hessian_x();

    // Poisson leg: ∂_m(P∇h) = (∂_m P)∇h + P H e_m.
    Mat3 j = sys.poisson.eval(x) * hh;
    for (std::size_t m = 0; m < 3; ++m) {
        const StateVec col = sys.poisson.derivative_x(m) * dh;
        for (std::size_t r = 0; r < 3; ++r) j(r, m) += col[r];
    }

    // The formula metrics act as g b = |b|² a − (a·b) b with a = ∇h, b = ∇c;
    // the first kind has b = a and vanishes identically, the symmetrized
    // second kind is exactly half the second kind (gᵀ b ≡ 0).
    const StateVec a = dh;
    const StateVec b = sys.metric_leg.grad_x(x);
    const Mat3 cc = sys.metric_leg.hessian_x();
    Mat3 jg = 2.0 * outer(a, cc * b) + dot(b, b) * hh - outer(b, cc * a + hh * b) - dot(a, b) * cc;
    switch (sys.metric) {
        case MetricKind::FirstKind: return j + jg;
        case MetricKind::SecondKind: return j + jg;
        case MetricKind::SecondKindSymmetric: return j + 0.5 * jg;
        default: throw DomainError("metriplectic_jacobian: no closed form for tabulated metrics");
    }
}

StateVec literal_system_38(const StateVec& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    return {x2 * x3 + x1 * x2 * (x1 - x2), -x1 * x3 + x1 * x1, x1 * x2};
}

Mat3 literal_system_38_jacobian(const StateVec& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    Mat3 j;
    j(0, 0) = 2 * x1 * x2 - x2 * x2;
    j(0, 1) = x3 + x1 * x1 - 2 * x1 * x2;
    j(0, 2) = x2;
    j(1, 0) = -x3 + 2 * x1;
    j(1, 2) = -x1;
    j(2, 0) = x2;
    j(2, 1) = x1;
    return j;
}

StateVec literal_system_10(const StateVec& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    return {x2 * x3 + x1 * (x2 * x2 + x3 * x3), -x1 * x3 + x2 * x3, x1 * x2};
}

Mat3 literal_system_10_jacobian(const StateVec& x) {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    Mat3 j;
    j(0, 0) = x2 * x2 + x3 * x3;
    j(0, 1) = x3 + 2 * x1 * x2;
    j(0, 2) = x2 + 2 * x1 * x3;
    j(1, 0) = -x3;
    j(1, 1) = x3;
    j(1, 2) = -x1 + x2;
    j(2, 0) = x2;
    j(2, 1) = x1;
    return j;
}

Cubic characteristic_polynomial(const Mat3& j) {
    const double minors = (j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0)) + (j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0)) +
                          (j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1));
    return {-j.det(), minors, -j.trace(), 1.0};
}

Cubic char_poly_at_equilibrium(const VectorField& field, const EquilibriumFamily& fam) {
    const StateVec p = equilibrium_point(fam);
    const StateVec r = field(p);
    if (sup_norm(r) != 0.0) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s point is not stationary for '%s': residual (%.17g, %.17g, %.17g)",
                      to_string(fam.kind), field.id.c_str(), r[0], r[1], r[2]);
        throw NotStationaryError(buf, r);
    }
    return characteristic_polynomial(jacobian(field, p, JacobianMode::Analytic));
}

bool printed_char_poly(std::string_view system, const EquilibriumFamily& fam, Cubic& out) {
    const double m = fam.m, m2 = m * m;
    if (system == "literal38") {
        switch (fam.kind) {
            case EquilibriumKind::E1: out = {0, -m2 * (m + 1), 0, 1}; return true;  // λ(−λ²+m²(m+1))
            case EquilibriumKind::E2: out = {0, -m2, m2, 1}; return true;           // −λ(λ²+m²λ−m²)
            case EquilibriumKind::E3: out = {0, m2, 0, 1}; return true;             // λ(λ²+m²)
        }
    }
    if (system == "literal10") {
        switch (fam.kind) {
            case EquilibriumKind::E1: out = {0, m2, 0, 1}; return true;             // λ(λ²+m²)
            case EquilibriumKind::E2: out = {0, -m2, -m2, 1}; return true;          // λ(λ²−λm²−m²)
            case EquilibriumKind::E3: out = {0, m2, -(m + m2), 1}; return true;     // λ(λ²−λ(m+m²)+m²)
        }
    }
    return false;
}

bool printed_linear_part(std::string_view system, const EquilibriumFamily& fam, Mat3& out) {
    const double m = fam.m, m2 = m * m;
    out = Mat3{};
    if (system == "literal38") {
        switch (fam.kind) {
            case EquilibriumKind::E1:
                out(0, 1) = m2;
                out(1, 2) = m2 + m;
                out(2, 1) = m;
                return true;
            case EquilibriumKind::E2:
                out(0, 0) = -m2;
                out(0, 2) = m;
                out(2, 0) = m;
                return true;
            case EquilibriumKind::E3:
                out(0, 1) = m;
                out(1, 0) = -m;
                return true;
        }
    }
    if (system == "literal10") {
        switch (fam.kind) {
            case EquilibriumKind::E1:
                out(1, 2) = -m;
                out(2, 1) = m;
                return true;
            case EquilibriumKind::E2:
                out(0, 0) = m2;
                out(0, 2) = m;
                out(1, 2) = m;
                out(2, 0) = m;
                return true;
            case EquilibriumKind::E3:
                out(0, 0) = m2;
                out(0, 1) = m;
                out(1, 0) = -m;
                out(1, 1) = m;
                return true;
        }
    }
    return false;
}

}  // namespace rabinovich
