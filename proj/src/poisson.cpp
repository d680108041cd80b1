#include "rabinovich/poisson.hpp"

#include <cmath>
#include <initializer_list>

#include "rabinovich/core_dynamics.hpp"

namespace rabinovich {

namespace {

std::array<double, 6> stack(const StateVec& x, const StateVec& xt) {
    return {x[0], x[1], x[2], xt[0], xt[1], xt[2]};
}

double apply(const Coeff6& c, const std::array<double, 6>& z) {
    double s = 0.0;
    for (std::size_t k = 0; k < 6; ++k) s += c[k] * z[k];
    return s;
}

Coeff6 form(double x1, double x2, double x3, double t1 = 0, double t2 = 0, double t3 = 0) {
    return {x1, x2, x3, t1, t2, t3};
}

bool has_delay_part(const Coeff6& c) { return c[3] != 0.0 || c[4] != 0.0 || c[5] != 0.0; }

}  // namespace

// ---- QuadraticFn ------------------------------------------------------------

QuadraticFn QuadraticFn::from_matrix(const Mat6& q, const Coeff6& linear, double constant) {
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j)
            if (q[i][j] != q[j][i]) throw DomainError("QuadraticFn: coefficient matrix is not symmetric");
    QuadraticFn f;
    f.q_ = q;
    f.b_ = linear;
    f.c_ = constant;
    return f;
}

QuadraticFn QuadraticFn::coordinate(std::size_t i) {
    if (i >= 6) throw DomainError("QuadraticFn::coordinate: index out of range");
    QuadraticFn f;
    f.b_[i] = 1.0;
    return f;
}

QuadraticFn QuadraticFn::product(std::size_t i, std::size_t j) {
    if (i >= 6 || j >= 6) throw DomainError("QuadraticFn::product: index out of range");
    QuadraticFn f;
    // ½ zᵀQz = z_i z_j
    if (i == j) {
        f.q_[i][i] = 2.0;
    } else {
        f.q_[i][j] = 1.0;
        f.q_[j][i] = 1.0;
    }
    return f;
}

QuadraticFn QuadraticFn::diagonal(double d1, double d2, double d3) {
    QuadraticFn f;
    f.q_[0][0] = d1;
    f.q_[1][1] = d2;
    f.q_[2][2] = d3;
    return f;
}

std::array<double, 6> QuadraticFn::z_grad(const StateVec& x, const StateVec& xt) const {
    const auto z = stack(x, xt);
    std::array<double, 6> g{};
    for (std::size_t i = 0; i < 6; ++i) g[i] = apply(q_[i], z) + b_[i];
    return g;
}

double QuadraticFn::operator()(const StateVec& x, const StateVec& xt) const {
    const auto z = stack(x, xt);
    double quad = 0.0;
    for (std::size_t i = 0; i < 6; ++i) quad += z[i] * apply(q_[i], z);
    return 0.5 * quad + apply(b_, z) + c_;
}

StateVec QuadraticFn::grad_x(const StateVec& x, const StateVec& xt) const {
    const auto g = z_grad(x, xt);
    return {g[0], g[1], g[2]};
}

StateVec QuadraticFn::grad_xt(const StateVec& x, const StateVec& xt) const {
    const auto g = z_grad(x, xt);
    return {g[3], g[4], g[5]};
}

Mat3 QuadraticFn::hessian_x() const {
    Mat3 h;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) h(i, j) = q_[i][j];
    return h;
}

bool QuadraticFn::uses_delay() const {
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if ((i >= 3 || j >= 3) && q_[i][j] != 0.0) return true;
    return has_delay_part(b_);
}

QuadraticFn& QuadraticFn::operator+=(const QuadraticFn& o) {
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) q_[i][j] += o.q_[i][j];
        b_[i] += o.b_[i];
    }
    c_ += o.c_;
    return *this;
}

QuadraticFn& QuadraticFn::operator*=(double s) {
    for (auto& row : q_)
        for (auto& v : row) v *= s;
    for (auto& v : b_) v *= s;
    c_ *= s;
    return *this;
}

// ---- PoissonTensor ----------------------------------------------------------

PoissonTensor PoissonTensor::from_upper(const Coeff6& p12, const Coeff6& p13, const Coeff6& p23) {
    PoissonTensor p;
    p.u12_ = p12;
    p.u13_ = p13;
    p.u23_ = p23;
    return p;
}

Coeff6 PoissonTensor::entry(std::size_t i, std::size_t j) const {
    if (i > 2 || j > 2) throw DomainError("PoissonTensor::entry: index out of range");
    auto neg = [](Coeff6 c) {
        for (auto& v : c) v = -v;
        return c;
    };
    if (i == j) return {};
    if (i == 0 && j == 1) return u12_;
    if (i == 0 && j == 2) return u13_;
    if (i == 1 && j == 2) return u23_;
    return neg(entry(j, i));
}

Mat3 PoissonTensor::eval(const StateVec& x) const {
    if (uses_delay()) throw DomainError("tensor_eval: tensor references x̃ but no delayed state was given");
    return eval(x, StateVec{});
}

Mat3 PoissonTensor::eval(const StateVec& x, const StateVec& xt) const {
    const auto z = stack(x, xt);
    Mat3 m;
    m(0, 1) = apply(u12_, z);
    m(0, 2) = apply(u13_, z);
    m(1, 2) = apply(u23_, z);
    m(1, 0) = -m(0, 1);
    m(2, 0) = -m(0, 2);
    m(2, 1) = -m(1, 2);
    return m;
}

Mat3 PoissonTensor::derivative_x(std::size_t k) const {
    Mat3 m;
    m(0, 1) = u12_.at(k);
    m(0, 2) = u13_.at(k);
    m(1, 2) = u23_.at(k);
    m(1, 0) = -m(0, 1);
    m(2, 0) = -m(0, 2);
    m(2, 1) = -m(1, 2);
    return m;
}

bool PoissonTensor::uses_delay() const {
    return has_delay_part(u12_) || has_delay_part(u13_) || has_delay_part(u23_);
}

PoissonTensor& PoissonTensor::operator+=(const PoissonTensor& o) {
    for (std::size_t k = 0; k < 6; ++k) {
        u12_[k] += o.u12_[k];
        u13_[k] += o.u13_[k];
        u23_[k] += o.u23_[k];
    }
    return *this;
}

PoissonTensor& PoissonTensor::operator*=(double s) {
    for (std::size_t k = 0; k < 6; ++k) {
        u12_[k] *= s;
        u13_[k] *= s;
        u23_[k] *= s;
    }
    return *this;
}

// ---- Named structures -------------------------------------------------------

void PoissonPencil::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma))
        throw DomainError("PoissonPencil: non-finite parameter");
    if (alpha == 0.0) throw DomainError("PoissonPencil: alpha must be nonzero");
}

PoissonTensor tensor_p1() {
    // [[0, x3, −x2], [−x3, 0, 0], [x2, 0, 0]]
    return PoissonTensor::from_upper(form(0, 0, 1), form(0, -1, 0), form(0, 0, 0));
}

PoissonTensor tensor_p2() {
    // [[0, 0, x2/2], [0, 0, −x1/2], [−x2/2, x1/2, 0]]
    return PoissonTensor::from_upper(form(0, 0, 0), form(0, 0.5, 0), form(-0.5, 0, 0));
}

PoissonTensor tensor_p3() {
    // [[0, 0, −x2/2], [0, 0, x1/2], [x2/2, −x1/2, 0]]
    return PoissonTensor::from_upper(form(0, 0, 0), form(0, -0.5, 0), form(0.5, 0, 0));
}

PoissonTensor pencil_tensor(const PoissonPencil& p) {
    p.validate();
    return p.alpha * tensor_p1() + p.beta * tensor_p2() + p.gamma * tensor_p3();
}

QuadraticFn ham_h1() { return QuadraticFn::diagonal(1, 1, 0); }
QuadraticFn ham_h2() { return QuadraticFn::diagonal(0, 2, 2); }
QuadraticFn ham_h3() { return QuadraticFn::diagonal(2, 0, -2); }

QuadraticFn pencil_hamiltonian(const PoissonPencil& p) {
    p.validate();
    return QuadraticFn::diagonal(1.0 / p.alpha, 1.0 / p.alpha, 0.0);
}

QuadraticFn casimir_c1() { return QuadraticFn::diagonal(0, 1, 1); }
QuadraticFn casimir_c2() { return QuadraticFn::diagonal(2, 2, 0); }
QuadraticFn casimir_c3() { return QuadraticFn::diagonal(2, 2, 0); }

QuadraticFn pencil_casimir(const PoissonPencil& p) {
    p.validate();
    // −(1/α)(β/2 − γ/2) x1² + (1/α)(α − β/2 + γ/2) x2² + x3²
    const double q = p.beta / 2 - p.gamma / 2;
    const double r = p.alpha - p.beta / 2 + p.gamma / 2;
    return QuadraticFn::diagonal(-2.0 * q / p.alpha, 2.0 * r / p.alpha, 2.0);
}

QuadraticFn alt_hamiltonian() { return QuadraticFn::diagonal(1, 1, 0); }
QuadraticFn alt_casimir() { return QuadraticFn::diagonal(0, 1, 1); }

QuadraticFn quadratic_by_name(std::string_view name) {
    if (name == "h1") return ham_h1();
    if (name == "h2") return ham_h2();
    if (name == "h3") return ham_h3();
    if (name == "c1") return casimir_c1();
    if (name == "c2") return casimir_c2();
    if (name == "c3") return casimir_c3();
    throw DomainError("unknown quadratic function '" + std::string(name) + "'");
}

// ---- Bracket calculus -------------------------------------------------------

Mat3 tensor_eval(const PoissonTensor& p, const StateVec& x) {
    require_finite(x, "tensor_eval");
    return p.eval(x);
}

Mat3 tensor_eval(const PoissonTensor& p, const StateVec& x, const StateVec& xt) {
    require_finite(x, "tensor_eval");
    require_finite(xt, "tensor_eval");
    return p.eval(x, xt);
}

namespace {

// Evaluates P and resolves the delayed argument, rejecting a missing x̃ when
// anything involved references it.
struct Frame {
    Mat3 p;
    StateVec xt;
};

Frame frame(const PoissonTensor& p, std::initializer_list<const QuadraticFn*> fns, const StateVec& x,
            const std::optional<StateVec>& xt) {
    require_finite(x, "bracket");
    if (xt) {
        require_finite(*xt, "bracket");
        return {p.eval(x, *xt), *xt};
    }
    for (const auto* f : fns)
        if (f->uses_delay()) throw DomainError("function references x̃ but no delayed state was given");
    return {p.eval(x), StateVec{}};
}

}  // namespace

double bracket(const PoissonTensor& p, const QuadraticFn& f, const QuadraticFn& g,
               const StateVec& x, const std::optional<StateVec>& xt) {
    const auto fr = frame(p, {&f, &g}, x, xt);
    return dot(f.grad_x(x, fr.xt), fr.p * g.grad_x(x, fr.xt));
}

StateVec bracket_gradient(const PoissonTensor& p, const QuadraticFn& f, const QuadraticFn& g,
                          const StateVec& x, const std::optional<StateVec>& xt) {
    // ∂_m (∇fᵀ P ∇g) = (H_f P∇g)_m + ∇fᵀ (∂_m P) ∇g + (H_g Pᵀ ∇f)_m
    const auto fr = frame(p, {&f, &g}, x, xt);
    const StateVec df = f.grad_x(x, fr.xt);
    const StateVec dg = g.grad_x(x, fr.xt);
    StateVec out = f.hessian_x() * (fr.p * dg) + g.hessian_x() * (fr.p.transpose() * df);
    for (std::size_t m = 0; m < 3; ++m) out[m] += dot(df, p.derivative_x(m) * dg);
    return out;
}

double jacobi_residual(const PoissonTensor& p, const QuadraticFn& f, const QuadraticFn& g,
                       const QuadraticFn& h, const StateVec& x, const std::optional<StateVec>& xt) {
    const auto fr = frame(p, {&f, &g, &h}, x, xt);
    auto outer_bracket = [&](const QuadraticFn& a, const QuadraticFn& b, const QuadraticFn& c) {
        return dot(a.grad_x(x, fr.xt), fr.p * bracket_gradient(p, b, c, x, fr.xt));
    };
    return outer_bracket(f, g, h) + outer_bracket(g, h, f) + outer_bracket(h, f, g);
}

StateVec casimir_residual(const PoissonTensor& p, const QuadraticFn& c, const StateVec& x,
                          const std::optional<StateVec>& xt) {
    const auto fr = frame(p, {&c}, x, xt);
    return fr.p * c.grad_x(x, fr.xt);
}

StateVec hamiltonian_field(const PoissonTensor& p, const QuadraticFn& h, const StateVec& x,
                           const std::optional<StateVec>& xt) {
    const auto fr = frame(p, {&h}, x, xt);
    return fr.p * h.grad_x(x, fr.xt);
}

double tri_hamiltonian_gap(const StateVec& x) {
    const std::array<StateVec, 4> fields{
        hamiltonian_field(tensor_p1(), ham_h1(), x),
        hamiltonian_field(tensor_p2(), ham_h2(), x),
        hamiltonian_field(tensor_p3(), ham_h3(), x),
        rabinovich_field(x),
    };
    double gap = 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j)
            gap = std::max(gap, sup_norm(fields[i] - fields[j]));
    return gap;
}

}  // namespace rabinovich
