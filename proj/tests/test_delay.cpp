#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "rabinovich/delay.hpp"
#include "test_support.hpp"

using namespace rabinovich;
using rabinovich::testing::random_state;

namespace {

// Independent quadrature of ∫ k(s) e^{−λs} ds (oracle for the closed forms).
double quad_laplace(const Kernel& k, double lambda) {
    auto f = [&](double s) { return kernel_density(k, s) * std::exp(-lambda * s); };
    if (const auto* u = std::get_if<kernel::Uniform>(&k.variant()))
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, u->a, u->a + u->tau, 15, 1e-14);
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

BlendWeights random_weights(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    std::array<double, 4> e{}, d{};
    double se = 0, sd = 0;
    for (int i = 0; i < 4; ++i) {
        e[i] = u(rng);
        d[i] = u(rng);
        se += e[i];
        sd += d[i];
    }
    for (int i = 0; i < 4; ++i) {
        e[i] /= se;
        d[i] /= sd;
    }
    return {e, d};
}

// Expanded right-hand side, coded independently of the tensor/Hamiltonian blends.
StateVec expanded(const StateVec& x, const StateVec& t, const BlendWeights& w) {
    const double p = w.a1() * x[2] + w.a5() * t[2];
    const double r = w.b2() * x[0] + w.b3() * t[0];
    return {p * (w.b1() * x[1] + w.b4() * t[1]), -p * r, (w.a2() * x[1] + w.a4() * t[1]) * r};
}

}  // namespace

TEST_CASE("kernel densities") {
    CHECK(kernel_density(Kernel::uniform(1, 2), 1.5) == 0.5);
    CHECK(kernel_density(Kernel::uniform(1, 2), 0.5) == 0.0);
    CHECK(kernel_density(Kernel::uniform(1, 2), 4.0) == 0.0);
    CHECK(kernel_density(Kernel::exponential(2), 0.0) == 2.0);
    CHECK(kernel_density(Kernel::erlang(1), 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(kernel_density(Kernel::dirac(1), 1.0), DomainError);
    CHECK_THROWS_AS(Kernel::uniform(-1, 1), DomainError);
    CHECK_THROWS_AS(Kernel::uniform(0, 0), DomainError);
    CHECK_THROWS_AS(Kernel::exponential(0), DomainError);
    CHECK_THROWS_AS(Kernel::erlang(-2), DomainError);
    CHECK_THROWS_AS(Kernel::dirac(0), DomainError);
}

TEST_CASE("kernel normalization by independent quadrature") {
    for (const Kernel& k : {Kernel::uniform(0, 1), Kernel::uniform(1, 2), Kernel::exponential(0.5),
                            Kernel::exponential(50), Kernel::erlang(1), Kernel::erlang(7)}) {
        INFO(k.describe());
        CHECK(std::abs(quad_laplace(k, 0.0) - 1.0) < 1e-8);
    }
}

TEST_CASE("Laplace transforms: closed forms against quadrature") {
    const Kernel ks[] = {Kernel::uniform(0.5, 1.5), Kernel::exponential(2), Kernel::erlang(1.5),
                         Kernel::dirac(0.7)};
    for (const auto& k : ks) CHECK(kernel_laplace(k, 0.0) == std::complex<double>(1.0, 0.0));
    CHECK(kernel_laplace(Kernel::exponential(2), 2.0) == std::complex<double>(0.5, 0.0));
    const std::complex<double> lam(0.3, 2.0);
    CHECK(std::abs(kernel_laplace(Kernel::dirac(0.7), lam) - std::exp(-0.7 * lam)) < 1e-15);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0, 5);
    for (int i = 0; i < 20; ++i) {
        const double l = u(rng);
        for (int j = 0; j < 3; ++j) CHECK(std::abs(kernel_laplace(ks[j], l).real() - quad_laplace(ks[j], l)) < 1e-6);
    }
    // The small-|τλ| branch of the uniform transform joins the direct formula smoothly.
    const Kernel u1 = Kernel::uniform(0.2, 1.0);
    const auto a = kernel_laplace(u1, {9.99e-4, 0}), b = kernel_laplace(u1, {1.001e-3, 0});
    CHECK(std::abs(a - b) < 1e-5);
    CHECK_THROWS_AS(kernel_laplace(Kernel::exponential(2), {-2.0, 1.0}), DomainError);
    CHECK_THROWS_AS(kernel_laplace(Kernel::erlang(2), {-3.0, 0.0}), DomainError);
}

TEST_CASE("blend weights") {
    CHECK_THROWS_AS(BlendWeights({0.5, 0.5, 0.1, 0}, {1, 0, 0, 0}), DomainError);
    CHECK_THROWS_AS(BlendWeights({1.2, -0.2, 0, 0}, {1, 0, 0, 0}), DomainError);
    const BlendWeights w({0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1});
    CHECK(w.a1() == doctest::Approx(0.3));
    CHECK(w.a5() == doctest::Approx(0.7));
    CHECK(w.b3() == doctest::Approx(0.4));
    CHECK(w.b4() == doctest::Approx(0.3));
}

TEST_CASE("delayed state examples") {
    const History c = History::constant({1, 2, 3});
    for (const Kernel& k : {Kernel::uniform(1, 2), Kernel::exponential(3), Kernel::erlang(2), Kernel::dirac(1)})
        CHECK(delayed_state(c, k, 0.0) == StateVec{1, 2, 3});

    const History lin = History::function([](double s) { return StateVec{s, 0, 0}; });
    CHECK(delayed_state(lin, Kernel::dirac(1), 0.0) == StateVec{-1, 0, 0});
    CHECK(delayed_state(lin, Kernel::dirac(1), -0.5) == StateVec{-1.5, 0, 0});

    const History ex = History::function([](double s) { return StateVec{std::exp(s), 0, 0}; });
    for (double a : {0.5, 2.0, 10.0}) {
        CHECK(std::abs(delayed_state(ex, Kernel::exponential(a), 0.0)[0] - a / (a + 1)) < 1e-8);
        CHECK(std::abs(delayed_state(ex, Kernel::erlang(a), 0.0)[0] - a * a / ((a + 1) * (a + 1))) < 1e-8);
    }
    const double want = 0.5 * (std::exp(-1.0) - std::exp(-3.0));
    CHECK(std::abs(delayed_state(ex, Kernel::uniform(1, 2), 0.0)[0] - want) < 1e-6);
}

TEST_CASE("insufficient history names the required time") {
    std::vector<History::Sample> s;
    for (int i = 0; i <= 10; ++i) s.push_back({-1.0 + 0.1 * i, {1, 0, 0}, std::nullopt});
    const History h = History::sampled(s);
    CHECK(delayed_state(h, Kernel::dirac(0.5), 0.0) == StateVec{1, 0, 0});
    try {
        delayed_state(h, Kernel::dirac(2.0), 0.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("t=-2") != std::string::npos);
    }
    CHECK_THROWS_AS(delayed_state(h, Kernel::exponential(1.0), 0.0), DomainError);
    CHECK_THROWS_AS(delayed_state(h, Kernel::dirac(0.5), 1.0), DomainError);  // future beyond the buffer
}

TEST_CASE("history buffer invariants and interpolation") {
    History h = History::function([](double s) { return StateVec{s * s * s, 0, 0}; });
    CHECK_THROWS_AS(h.append(-1.0, {}), DomainError);
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.1 * i;
        h.append(t, {t * t * t, 0, 0}, StateVec{3 * t * t, 0, 0});
    }
    CHECK_THROWS_AS(h.append(1.0, {}), DomainError);
    // Cubic Hermite reproduces cubics exactly.
    CHECK(std::abs(h.at(0.537)[0] - 0.537 * 0.537 * 0.537) < 1e-13);
    CHECK(h.at(-0.3)[0] == doctest::Approx(-0.027));
    h.set_interpolation(History::Interpolation::Linear);
    CHECK(std::abs(h.at(0.55)[0] - 0.5 * (0.125 + 0.216)) < 1e-14);
    CHECK_THROWS_AS(h.at(2.5), DomainError);
}

TEST_CASE("delay Hamiltonian field") {
    std::mt19937_64 rng(59);
    for (int i = 0; i < 100; ++i) {
        const StateVec x = random_state(rng, -3, 3), t = random_state(rng, -3, 3);
        const BlendWeights w = random_weights(rng);
        const StateVec f = delay_hamiltonian_field(x, t, w);
        CHECK(sup_norm(f - expanded(x, t, w)) < 1e-12);
        CHECK(delay_hamiltonian_field(x, t, BlendWeights::no_delay()) == rabinovich_field(x));
        CHECK(sup_norm(delay_hamiltonian_field(x, x, w) - rabinovich_field(x)) < 1e-12);
        // ∇ₓl · P(x̃,x) = 0
        const StateVec gl = blended_casimir(w).grad_x(x, t);
        const StateVec row = blended_tensor(w).eval(x, t).transpose() * gl;
        CHECK(sup_norm(row) < 1e-12);
    }
}

TEST_CASE("revised delay field") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 20; ++i) {
        const StateVec x = random_state(rng, -3, 3), t = random_state(rng, -3, 3);
        CHECK(revised_delay_field(x, t, BlendWeights::no_delay()) == rabinovich_field(x));
    }
    const StateVec x{1, 2, 3}, t{0.5, -1, 2};
    const BlendWeights w({0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1});
    CHECK(sup_norm(revised_delay_field(x, t, w, RevisedMode::Literal) - revised_delay_field(x, t, w)) > 1e-3);
    // The literal form keeps extra terms even without delay.
    CHECK(sup_norm(revised_delay_field(x, t, BlendWeights::no_delay(), RevisedMode::Literal) - rabinovich_field(x)) > 1.0);
    CHECK(sup_norm(revised_delay_field({0, 0, 2}, {0, 0, 2}, w)) == 0.0);
}

TEST_CASE("linearization of the delay field") {
    const BlendWeights w({0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1});
    DelayField f = [&](const StateVec& x, const StateVec& t) { return delay_hamiltonian_field(x, t, w); };
    const auto [a, b] = linearize_delay_field(f, {0, 0, 1.5});
    // A + B equals the classical Jacobian; ∂ẋ1/∂x2 at (0,0,m) is (α₁+α₅)β₁m = β₁m.
    CHECK(max_abs_diff(a + b, rabinovich_jacobian({0, 0, 1.5})) < 1e-8);
    CHECK(a(0, 1) == doctest::Approx(w.b1() * 1.5).epsilon(1e-8));
}

TEST_CASE("DDE integration: equilibria, Dirac method of steps") {
    const BlendWeights w({0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4});
    DelayField f = [&](const StateVec& x, const StateVec& t) { return delay_hamiltonian_field(x, t, w); };
    for (const Kernel& k : {Kernel::uniform(0.5, 1), Kernel::exponential(3), Kernel::erlang(2), Kernel::dirac(1)}) {
        const Trajectory tr = integrate_dde(f, k, History::constant({0, 0, 1.2}), 0.05, 3.0);
        for (const auto& s : tr.states()) CHECK(sup_norm(s - StateVec{0, 0, 1.2}) < 1e-14);
    }
    DelayField ignore = [](const StateVec& x, const StateVec&) { return rabinovich_field(x); };
    const Trajectory a = integrate_dde(ignore, Kernel::dirac(0.5), History::constant({1, 2, 3}), 0.01, 5.0);
    const Trajectory b = integrate_rk4(builtin_field("classical"), {1, 2, 3}, 0.01, 500);
    REQUIRE(a.size() == b.size());
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, sup_norm(a.states()[i] - b.states()[i]));
    CHECK(worst < 1e-10);
    CHECK_THROWS_AS(integrate_dde(f, Kernel::dirac(0.1), History::constant({1, 2, 3}), 0.06, 1.0), DomainError);
    CHECK_THROWS_AS(integrate_dde(f, Kernel::dirac(0.1), History::constant({1, 2, 3}), 0.0, 1.0), DomainError);
}

TEST_CASE("DDE integration: Dirac delay against an Euler-free scalar oracle") {
    // ẋ1 = −x̃1 with φ ≡ 1, τ = 1: on [0,1] x1 = 1 − t, on [1,2] x1 = 1 − t + (t−1)²/2.
    DelayField f = [](const StateVec&, const StateVec& t) { return StateVec{-t[0], 0, 0}; };
    const Trajectory tr = integrate_dde(f, Kernel::dirac(1.0), History::constant({1, 0, 0}), 0.01, 2.0);
    for (std::size_t i = 0; i < tr.size(); i += 10) {
        const double t = tr.time(i);
        const double want = t <= 1 ? 1 - t : 1 - t + 0.5 * (t - 1) * (t - 1);
        CHECK(std::abs(tr.states()[i][0] - want) < 1e-10);
    }
}

TEST_CASE("DDE integration: linear chain trick agrees with direct quadrature") {
    const BlendWeights w({0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4});
    DelayField f = [&](const StateVec& x, const StateVec& t) { return delay_hamiltonian_field(x, t, w); };
    for (const Kernel& k : {Kernel::exponential(2.0), Kernel::erlang(3.0)}) {
        History hist = History::constant({0, 0, 0});
        const Trajectory tr = integrate_dde(f, k, History::constant({0.5, 0.3, 0.2}), 0.005, 4.0, {}, &hist);
        double worst = 0;
        for (std::size_t i = 200; i < tr.size(); i += 100) {
            const StateVec chain{tr.monitor("xt1")[i], tr.monitor("xt2")[i], tr.monitor("xt3")[i]};
            worst = std::max(worst, sup_norm(chain - delayed_state(hist, k, tr.time(i))));
        }
        INFO(k.describe());
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("DDE integration: concentrated kernels approach the classical flow") {
    const BlendWeights w({0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4});
    DelayField f = [&](const StateVec& x, const StateVec& t) { return delay_hamiltonian_field(x, t, w); };
    const StateVec x0{0.5, 0.3, 0.2};
    const Trajectory ref = integrate_rk4(builtin_field("classical"), x0, 0.005, 2000);
    auto gap = [&](const Kernel& k) {
        const Trajectory tr = integrate_dde(f, k, History::constant(x0), 0.005, 10.0);
        double worst = 0;
        for (std::size_t i = 0; i < tr.size(); ++i) worst = std::max(worst, sup_norm(tr.states()[i] - ref.states()[i]));
        return worst;
    };
    const double e50 = gap(Kernel::exponential(50));
    CHECK(e50 < 5e-2);
    double prev = 1e300;
    for (double tau : {0.2, 0.1, 0.05}) {
        const double e = gap(Kernel::uniform(0, tau));
        std::printf("uniform tau=%g sup gap %.3e\n", tau, e);
        CHECK(e < prev);
        prev = e;
    }
    const double a = gap(Kernel::erlang(20)), b = gap(Kernel::erlang(40));
    std::printf("erlang alpha 20 -> 40 observed order %.2f\n", std::log2(a / b));
    CHECK(b < a);
}
