#include "rabinovich/delay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace rabinovich {

namespace {

std::string fmt_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    return buf;
}

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) throw DomainError(std::string(what) + " must be finite and positive");
}

// Smallest u with (1 + u) e^{−u} <= tail (Erlang tail mass after scaling by α).
double erlang_tail_point(double tail) {
    double u = -std::log(tail);
    for (int i = 0; i < 60; ++i) {
        const double f = std::log1p(u) - u - std::log(tail);
        const double df = 1.0 / (1.0 + u) - 1.0;
        const double step = f / df;
        u -= step;
        if (std::abs(step) < 1e-14 * u) break;
    }
    return u;
}

}  // namespace

// ---- Kernel -----------------------------------------------------------------

Kernel::Kernel(Variant v) : v_(v) {
    std::visit(
        [](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, kernel::Uniform>) {
                if (!std::isfinite(k.a) || k.a < 0.0) throw DomainError("uniform kernel: a must be >= 0");
                require_positive(k.tau, "uniform kernel: tau");
            } else if constexpr (std::is_same_v<T, kernel::Dirac>) {
                require_positive(k.tau, "dirac kernel: tau");
            } else {
                require_positive(k.alpha, "kernel: alpha");
            }
        },
        v_);
}

std::string Kernel::describe() const {
    char buf[128];
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, kernel::Uniform>)
                std::snprintf(buf, sizeof buf, "uniform(a=%.17g, tau=%.17g)", k.a, k.tau);
            else if constexpr (std::is_same_v<T, kernel::Exponential>)
                std::snprintf(buf, sizeof buf, "exponential(alpha=%.17g)", k.alpha);
            else if constexpr (std::is_same_v<T, kernel::Erlang>)
                std::snprintf(buf, sizeof buf, "erlang(alpha=%.17g)", k.alpha);
            else
                std::snprintf(buf, sizeof buf, "dirac(tau=%.17g)", k.tau);
        },
        v_);
    return buf;
}

std::pair<double, double> Kernel::support(double tail) const {
    return std::visit(
        [&](const auto& k) -> std::pair<double, double> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, kernel::Uniform>)
                return {k.a, k.a + k.tau};
            else if constexpr (std::is_same_v<T, kernel::Exponential>)
                return {0.0, -std::log(tail) / k.alpha};
            else if constexpr (std::is_same_v<T, kernel::Erlang>)
                return {0.0, erlang_tail_point(tail) / k.alpha};
            else
                return {k.tau, k.tau};
        },
        v_);
}

double kernel_density(const Kernel& k, double s) {
    if (!std::isfinite(s) || s < 0.0) throw DomainError("kernel_density: s must be finite and >= 0");
    return std::visit(
        [&](const auto& kk) -> double {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, kernel::Uniform>)
                return (s >= kk.a && s <= kk.a + kk.tau) ? 1.0 / kk.tau : 0.0;
            else if constexpr (std::is_same_v<T, kernel::Exponential>)
                return kk.alpha * std::exp(-kk.alpha * s);
            else if constexpr (std::is_same_v<T, kernel::Erlang>)
                return kk.alpha * kk.alpha * s * std::exp(-kk.alpha * s);
            else
                throw DomainError("kernel_density: the Dirac kernel is a distribution; use delayed_state");
        },
        k.variant());
}

std::complex<double> kernel_laplace(const Kernel& k, std::complex<double> lambda) {
    using C = std::complex<double>;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw DomainError("kernel_laplace: non-finite argument");
    return std::visit(
        [&](const auto& kk) -> C {
            using T = std::decay_t<decltype(kk)>;
            if constexpr (std::is_same_v<T, kernel::Uniform>) {
                // e^{−aλ}(1 − e^{−τλ})/(τλ), series near τλ = 0.
                const C z = kk.tau * lambda;
                C ratio;
                if (std::abs(z) < 1e-3)
                    ratio = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 + z * z * z * z / 120.0;
                else
                    ratio = (1.0 - std::exp(-z)) / z;
                return std::exp(-kk.a * lambda) * ratio;
            } else if constexpr (std::is_same_v<T, kernel::Exponential>) {
                if (lambda.real() <= -kk.alpha)
                    throw DomainError("kernel_laplace: exponential transform diverges for Re(lambda) <= -alpha");
                return kk.alpha / (kk.alpha + lambda);
            } else if constexpr (std::is_same_v<T, kernel::Erlang>) {
                if (lambda.real() <= -kk.alpha)
                    throw DomainError("kernel_laplace: Erlang transform diverges for Re(lambda) <= -alpha");
                const C d = kk.alpha + lambda;
                return kk.alpha * kk.alpha / (d * d);
            } else {
                return std::exp(-lambda * kk.tau);
            }
        },
        k.variant());
}

// ---- Blend weights and building blocks ----------------------------------------

BlendWeights::BlendWeights(std::array<double, 4> eps, std::array<double, 4> delta)
    : eps_(eps), delta_(delta) {
    auto check = [](const std::array<double, 4>& w, const char* name) {
        double sum = 0.0;
        for (double v : w) {
            if (!std::isfinite(v) || v < 0.0)
                throw DomainError(std::string("blend weights: ") + name + " entries must be finite and >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw DomainError(std::string("blend weights: ") + name + " must sum to 1");
    };
    check(eps_, "eps");
    check(delta_, "delta");
}

PoissonTensor delay_tensor(int i) {
    // Entry (1,2) is x3 or x̃3, entry (1,3) is −x2 or −x̃2.
    const bool tilde3 = (i == 2 || i == 3);
    const bool tilde2 = (i == 1 || i == 3);
    if (i < 0 || i > 3) throw DomainError("delay_tensor: index must be 0..3");
    Coeff6 p12{}, p13{};
    p12[tilde3 ? 5 : 2] = 1.0;
    p13[tilde2 ? 4 : 1] = -1.0;
    return PoissonTensor::from_upper(p12, p13, Coeff6{});
}

QuadraticFn delay_hamiltonian(int i) {
    // h0 = ½(x1²+x2²), h1 = x̃1x1 + ½x2², h2 = ½x1² + x̃2x2, h3 = x̃1x1 + x̃2x2
    switch (i) {
        case 0: return QuadraticFn::diagonal(1, 1, 0);
        case 1: return QuadraticFn::product(3, 0) + 0.5 * QuadraticFn::product(1, 1);
        case 2: return 0.5 * QuadraticFn::product(0, 0) + QuadraticFn::product(4, 1);
        case 3: return QuadraticFn::product(3, 0) + QuadraticFn::product(4, 1);
        default: throw DomainError("delay_hamiltonian: index must be 0..3");
    }
}

QuadraticFn delay_casimir(int i) {
    // l0 = ½(x2²+x3²), l1 = x̃2x2 + ½x3², l2 = ½x2² + x̃3x3, l3 = x̃2x2 + x̃3x3
    switch (i) {
        case 0: return QuadraticFn::diagonal(0, 1, 1);
        case 1: return QuadraticFn::product(4, 1) + 0.5 * QuadraticFn::product(2, 2);
        case 2: return 0.5 * QuadraticFn::product(1, 1) + QuadraticFn::product(5, 2);
        case 3: return QuadraticFn::product(4, 1) + QuadraticFn::product(5, 2);
        default: throw DomainError("delay_casimir: index must be 0..3");
    }
}

PoissonTensor blended_tensor(const BlendWeights& w) {
    PoissonTensor p;
    for (int i = 0; i < 4; ++i) p += w.eps()[static_cast<std::size_t>(i)] * delay_tensor(i);
    return p;
}

QuadraticFn blended_hamiltonian(const BlendWeights& w) {
    QuadraticFn h;
    for (int i = 0; i < 4; ++i) h += w.delta()[static_cast<std::size_t>(i)] * delay_hamiltonian(i);
    return h;
}

QuadraticFn blended_casimir(const BlendWeights& w) {
    QuadraticFn l;
    for (int i = 0; i < 4; ++i) l += w.eps()[static_cast<std::size_t>(i)] * delay_casimir(i);
    return l;
}

// ---- History ------------------------------------------------------------------

History History::constant(const StateVec& x0) {
    require_finite(x0, "History::constant");
    History h;
    h.phi_ = [x0](double) { return x0; };
    h.constant_ = x0;
    return h;
}

History History::function(std::function<StateVec(double)> phi) {
    if (!phi) throw DomainError("History::function: empty initial function");
    History h;
    h.phi_ = std::move(phi);
    return h;
}

History History::sampled(std::vector<Sample> samples) {
    if (samples.empty()) throw DomainError("History::sampled: no samples");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require_finite(samples[i].x, "History::sampled");
        if (i > 0 && !(samples[i].t > samples[i - 1].t))
            throw DomainError("History::sampled: timestamps must increase strictly");
    }
    if (samples.back().t > 0.0) throw DomainError("History::sampled: initial function must end at t <= 0");
    History h;
    h.phi_samples_ = std::move(samples);
    return h;
}

void History::append(double t, const StateVec& x, std::optional<StateVec> dxdt) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("History::append: node time must be >= 0");
    if (!buffer_.empty() && !(t > buffer_.back().t))
        throw DomainError("History::append: timestamps must increase strictly");
    buffer_.push_back({t, x, dxdt});
}

double History::earliest() const {
    if (phi_) return -std::numeric_limits<double>::infinity();
    return phi_samples_.front().t;
}

double History::latest() const { return buffer_.empty() ? 0.0 : buffer_.back().t; }

StateVec History::interpolate(const std::vector<Sample>& s, std::size_t i, double t, Interpolation mode) {
    // s[i].t <= t <= s[i+1].t
    const Sample& p = s[i];
    const Sample& q = s[i + 1];
    const double h = q.t - p.t;
    const double u = (t - p.t) / h;
    if (mode == Interpolation::Linear) return p.x * (1.0 - u) + q.x * u;

    if (p.dxdt && q.dxdt) {
        const double u2 = u * u, u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
        const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
        return h00 * p.x + (h10 * h) * *p.dxdt + h01 * q.x + (h11 * h) * *q.dxdt;
    }
    if (s.size() < 4) {
        if (s.size() < 3) return p.x * (1.0 - u) + q.x * u;
    }
    // Cubic (or quadratic) Lagrange through the nearest nodes.
    const std::size_t want = std::min<std::size_t>(4, s.size());
    std::size_t lo = (i >= 1) ? i - 1 : 0;
    if (lo + want > s.size()) lo = s.size() - want;
    StateVec out;
    for (std::size_t a = lo; a < lo + want; ++a) {
        double w = 1.0;
        for (std::size_t b = lo; b < lo + want; ++b)
            if (b != a) w *= (t - s[b].t) / (s[a].t - s[b].t);
        out += w * s[a].x;
    }
    return out;
}

namespace {
std::size_t bracket_index(const std::vector<History::Sample>& s, double t) {
    auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const History::Sample& x) { return v < x.t; });
    std::size_t j = static_cast<std::size_t>(it - s.begin());
    if (j == 0) return 0;
    if (j >= s.size()) return s.size() - 2;
    return j - 1;
}
}  // namespace

StateVec History::initial(double t) const {
    if (phi_) return phi_(t);
    const auto& s = phi_samples_;
    if (t < s.front().t || t > s.back().t)
        throw DomainError("insufficient history: initial function covers [" + fmt_time(s.front().t) + ", " +
                          fmt_time(s.back().t) + "], queried " + fmt_time(t));
    if (s.size() == 1 || t == s.back().t) return s.back().x;
    return interpolate(s, bracket_index(s, t), t, interp_);
}

StateVec History::at(double t) const {
    if (!std::isfinite(t)) throw DomainError("History::at: non-finite time");
    if (!buffer_.empty() && t >= buffer_.front().t) {
        const double tol = 1e-12 * std::max(1.0, std::abs(t));
        if (t > buffer_.back().t + tol)
            throw DomainError("insufficient history: computed up to t=" + fmt_time(buffer_.back().t) +
                              ", queried " + fmt_time(t));
        if (t >= buffer_.back().t) return buffer_.back().x;
        return interpolate(buffer_, bracket_index(buffer_, t), t, interp_);
    }
    if (t > 0.0)
        throw DomainError("insufficient history: nothing computed beyond t=0, queried " + fmt_time(t));
    return initial(t);
}

// ---- Delayed state --------------------------------------------------------------

namespace {

double history_spacing(const History& hist) {
    const auto& b = hist.buffer();
    if (b.size() >= 2) return b[b.size() - 1].t - b[b.size() - 2].t;
    return std::numeric_limits<double>::infinity();
}

// Composite trapezoid of (1/τ)∫_a^{a+τ} x(t−s) ds with at least 2000 cells
// and no cell wider than the history spacing.
StateVec uniform_average(const std::function<StateVec(double)>& x_at, double t, double a, double tau,
                         double max_step) {
    const long n = std::max<long>(1, static_cast<long>(std::ceil(tau / max_step - 1e-9)));
    const double h = tau / static_cast<double>(n);
    StateVec sum = 0.5 * (x_at(t - a) + x_at(t - a - tau));
    for (long i = 1; i < n; ++i) sum += x_at(t - a - static_cast<double>(i) * h);
    return sum * (h / tau);
}

}  // namespace

StateVec delayed_state(const History& hist, const Kernel& k, double t) {
    const auto [lo, hi] = k.support(1e-10);
    if (t - hi < hist.earliest())
        throw DomainError("insufficient history: kernel needs x from t=" + fmt_time(t - hi) +
                          ", history starts at " + fmt_time(hist.earliest()));
    if (t - lo > hist.latest() + 1e-12 * std::max(1.0, std::abs(t)))
        throw DomainError("insufficient history: kernel needs x up to t=" + fmt_time(t - lo) +
                          ", history ends at " + fmt_time(hist.latest()));

    if (const auto& c = hist.constant_value(); c && hist.buffer().empty()) return *c;

    auto x_at = [&](double r) { return hist.at(r); };
    const double spacing = history_spacing(hist);

    if (const auto* d = std::get_if<kernel::Dirac>(&k.variant())) return hist.at(t - d->tau);
    if (const auto* u = std::get_if<kernel::Uniform>(&k.variant()))
        return uniform_average(x_at, t, u->a, u->tau, std::min(spacing, u->tau / 2000.0));

    // Exponential / Erlang: composite Simpson over the truncated support,
    // normalized by the quadrature of the kernel itself.
    const double step = std::min(spacing, hi / 4000.0);
    long n = std::max<long>(2, static_cast<long>(std::ceil(hi / step)));
    if (n % 2) ++n;
    const double h = hi / static_cast<double>(n);
    StateVec acc;
    double mass = 0.0;
    for (long i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double kv = w * kernel_density(k, s);
        if (kv == 0.0) continue;
        acc += kv * x_at(t - s);
        mass += kv;
    }
    const StateVec out = acc * (1.0 / mass);
    if (!out.finite()) throw DomainError("delayed_state: quadrature produced a non-finite value");
    return out;
}

// ---- Delay fields -----------------------------------------------------------------

StateVec delay_hamiltonian_field(const StateVec& x, const StateVec& xt, const BlendWeights& w) {
    return blended_tensor(w).eval(x, xt) * blended_hamiltonian(w).grad_x(x, xt);
}

StateVec revised_delay_field(const StateVec& x, const StateVec& xt, const BlendWeights& w, RevisedMode mode) {
    if (mode == RevisedMode::Literal) {
        const double x1 = x[0], x2 = x[1], x3 = x[2];
        const double t1 = xt[0], t2 = xt[1], t3 = xt[2];
        const double p = w.a1() * x3 + w.a4() * t3;
        const double q = w.b1() * x2 + w.b4() * t2;
        const double r = w.b2() * x1 + w.b3() * t1;
        return {p * q + r * q * w.a2() * x3,
                -p * r - r * w.a3() * x3,
                (w.a2() * x2 + w.a3() * t2) * r - r * w.a4() * x3 - q * q * w.a3() * x3};
    }
    const StateVec a = blended_hamiltonian(w).grad_x(x, xt);
    const StateVec b = blended_casimir(w).grad_xt(x, xt);
    // g_ij = a_i a_j (i≠j), g_ii = −Σ_{k≠i} a_k².
    Mat3 g = outer(a, a);
    const double aa = dot(a, a);
    for (std::size_t i = 0; i < 3; ++i) g(i, i) = -(aa - a[i] * a[i]);
    return delay_hamiltonian_field(x, xt, w) + g * b;
}

std::pair<Mat3, Mat3> linearize_delay_field(const DelayField& f, const StateVec& x0) {
    require_finite(x0, "linearize_delay_field");
    const double h = 1e-6 * std::max(1.0, norm(x0));
    Mat3 a, b;
    for (std::size_t c = 0; c < 3; ++c) {
        StateVec p = x0, m = x0;
        p[c] += h;
        m[c] -= h;
        const StateVec da = f(p, x0) - f(m, x0);
        const StateVec db = f(x0, p) - f(x0, m);
        for (std::size_t r = 0; r < 3; ++r) {
            a(r, c) = da[r] / (2 * h);
            b(r, c) = db[r] / (2 * h);
        }
    }
    return {a, b};
}

// ---- Integration ------------------------------------------------------------------

namespace {

template <std::size_t N>
using Arr = std::array<double, N>;

template <std::size_t N>
Arr<N> axpy(const Arr<N>& x, double s, const Arr<N>& y) {
    Arr<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + s * y[i];
    return r;
}

template <std::size_t N>
bool all_finite(const Arr<N>& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

StateVec head(const double* p) { return {p[0], p[1], p[2]}; }

// Classical RK4 on an N-dimensional system whose right-hand side may depend
// on the stage time; `node` is called after each accepted step.
template <std::size_t N, class Rhs, class Node>
void rk4_run(Arr<N> y, double dt, long n, Rhs&& rhs, Node&& node) {
    node(0, y);
    for (long s = 0; s < n; ++s) {
        const double t = static_cast<double>(s) * dt;
        const Arr<N> k1 = rhs(t, y);
        const Arr<N> k2 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
        const Arr<N> k3 = rhs(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
        const Arr<N> k4 = rhs(t + dt, axpy(y, dt, k3));
        for (std::size_t i = 0; i < N; ++i) y[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!all_finite(y)) throw NumericalError("integrate_dde: state became non-finite", s + 1);
        node(s + 1, y);
    }
}

Arr<3> to_arr(const StateVec& v) { return {v[0], v[1], v[2]}; }

}  // namespace

Trajectory integrate_dde(const DelayField& field, const Kernel& k, const History& phi, double dt, double t_end,
                         const std::vector<Monitor>& monitors, History* hist_out) {
    require_positive(dt, "integrate_dde: dt");
    require_positive(t_end, "integrate_dde: T");
    const long n = std::lround(t_end / dt);
    if (n < 1) throw DomainError("integrate_dde: T must be at least one step");

    History hist = phi;
    hist.set_interpolation(History::Interpolation::Cubic);
    const StateVec x0 = phi.initial(0.0);
    require_finite(x0, "integrate_dde initial state");

    std::vector<StateVec> states, xts;
    states.reserve(static_cast<std::size_t>(n) + 1);
    xts.reserve(static_cast<std::size_t>(n) + 1);

    auto guarded = [&](const StateVec& x, const StateVec& xt, long step) {
        const StateVec f = field(x, xt);
        if (!f.finite()) throw NumericalError("integrate_dde: non-finite field value", step);
        return f;
    };

    if (const auto* d = std::get_if<kernel::Dirac>(&k.variant())) {
        if (dt > d->tau / 2.0 * (1.0 + 1e-12))
            throw DomainError("integrate_dde: dt must be <= tau/2 for the Dirac kernel");
        const double tau = d->tau;
        long step = 0;
        rk4_run<3>(
            to_arr(x0), dt, n,
            [&](double t, const Arr<3>& y) { return to_arr(guarded(head(y.data()), hist.at(t - tau), step)); },
            [&](long s, const Arr<3>& y) {
                step = s + 1;
                const double t = static_cast<double>(s) * dt;
                const StateVec x = head(y.data());
                const StateVec xt = hist.at(t - tau);
                hist.append(t, x, guarded(x, xt, s));
                states.push_back(x);
                xts.push_back(xt);
            });
    } else if (const auto* u = std::get_if<kernel::Uniform>(&k.variant())) {
        const double a = u->a, tau = u->tau;
        long step = 0;
        auto average = [&](double t, const StateVec& x_stage) {
            // x(r) for r beyond the last node is the chord to the stage state.
            const bool has_nodes = !hist.buffer().empty();
            const double tn = has_nodes ? hist.buffer().back().t : 0.0;
            const StateVec xn = has_nodes ? hist.buffer().back().x : x0;
            auto x_at = [&](double r) -> StateVec {
                if (r <= tn || t <= tn) return hist.at(std::min(r, tn));
                const double w = (r - tn) / (t - tn);
                return xn * (1.0 - w) + x_stage * w;
            };
            return uniform_average(x_at, t, a, tau, dt);
        };
        rk4_run<3>(
            to_arr(x0), dt, n,
            [&](double t, const Arr<3>& y) {
                const StateVec x = head(y.data());
                return to_arr(guarded(x, average(t, x), step));
            },
            [&](long s, const Arr<3>& y) {
                step = s + 1;
                const double t = static_cast<double>(s) * dt;
                const StateVec x = head(y.data());
                const StateVec xt = average(t, x);
                hist.append(t, x, guarded(x, xt, s));
                states.push_back(x);
                xts.push_back(xt);
            });
    } else {
        // Linear chain trick: y1' = α(x − y1) and, for Erlang, y2' = α(y1 − y2).
        const bool erlang = std::holds_alternative<kernel::Erlang>(k.variant());
        const double alpha = erlang ? std::get<kernel::Erlang>(k.variant()).alpha
                                    : std::get<kernel::Exponential>(k.variant()).alpha;
        StateVec y1 = delayed_state(phi, Kernel::exponential(alpha), 0.0);
        StateVec y2 = erlang ? delayed_state(phi, Kernel::erlang(alpha), 0.0) : y1;
        if (!y1.finite() || !y2.finite())
            throw DomainError("integrate_dde: chain initialization integral diverges");
        long step = 0;
        rk4_run<9>(
            Arr<9>{x0[0], x0[1], x0[2], y1[0], y1[1], y1[2], y2[0], y2[1], y2[2]}, dt, n,
            [&](double, const Arr<9>& y) {
                const StateVec x = head(y.data()), c1 = head(y.data() + 3), c2 = head(y.data() + 6);
                const StateVec f = guarded(x, erlang ? c2 : c1, step);
                const StateVec d1 = alpha * (x - c1);
                const StateVec d2 = erlang ? alpha * (c1 - c2) : StateVec{};
                return Arr<9>{f[0], f[1], f[2], d1[0], d1[1], d1[2], d2[0], d2[1], d2[2]};
            },
            [&](long s, const Arr<9>& y) {
                step = s + 1;
                const StateVec x = head(y.data());
                const StateVec xt = erlang ? head(y.data() + 6) : head(y.data() + 3);
                hist.append(static_cast<double>(s) * dt, x, guarded(x, xt, s));
                states.push_back(x);
                xts.push_back(xt);
            });
    }

    Trajectory traj(0.0, dt, states);
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> col;
        col.reserve(xts.size());
        for (const auto& v : xts) col.push_back(v[c]);
        traj.add_monitor("xt" + std::to_string(c + 1), std::move(col));
    }
    for (const auto& m : monitors) {
        std::vector<double> values;
        values.reserve(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) values.push_back(m.fn(states[i], xts[i]));
        traj.add_monitor(m.name, std::move(values));
    }
    if (hist_out) *hist_out = std::move(hist);
    return traj;
}

}  // namespace rabinovich
