#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rabinovich/core_dynamics.hpp"
#include "test_support.hpp"

using namespace rabinovich;
using rabinovich::testing::random_state;

TEST_CASE("classical field at sample points") {
    CHECK(rabinovich_field({0, 0, 0}) == StateVec{0, 0, 0});
    CHECK(rabinovich_field({1, 2, 3}) == StateVec{6, -3, 2});
    for (double m : {-3.0, 0.5, 7.0}) CHECK(sup_norm(rabinovich_field({m, 0, 0})) == 0.0);
    CHECK_THROWS_AS(rabinovich_field({NAN, 0, 0}), DomainError);
    CHECK_THROWS_AS(rabinovich_field({0, INFINITY, 0}), DomainError);
}

TEST_CASE("equilibrium families are exactly stationary") {
    CHECK(equilibrium_point({EquilibriumKind::E1, 2}) == StateVec{2, 0, 0});
    CHECK(equilibrium_point({EquilibriumKind::E2, -1}) == StateVec{0, -1, 0});
    CHECK(equilibrium_point({EquilibriumKind::E3, 0}) == StateVec{0, 0, 0});
    for (auto k : {EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3})
        for (double m : {-2.0, -0.5, 0.0, 1.0, 3.5})
            CHECK(sup_norm(rabinovich_field(equilibrium_point({k, m}))) == 0.0);
}

TEST_CASE("analytic Jacobian of the classical field") {
    const VectorField f = builtin_field("classical");
    const double m = 1.7;
    Mat3 e2;  // [[0,0,m],[0,0,0],[m,0,0]]
    e2(0, 2) = m;
    e2(2, 0) = m;
    CHECK(jacobian(f, {0, m, 0}, JacobianMode::Analytic) == e2);
    Mat3 e3;  // [[0,m,0],[−m,0,0],[0,0,0]]
    e3(0, 1) = m;
    e3(1, 0) = -m;
    CHECK(jacobian(f, {0, 0, m}, JacobianMode::Analytic) == e3);
}

TEST_CASE("analytic and finite-difference Jacobians agree for all built-in fields") {
    std::mt19937_64 rng(7);
    for (const auto& id : builtin_field_ids()) {
        const VectorField f = builtin_field(id);
        if (!f.analytic_jacobian) continue;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            StateVec x = random_state(rng, -10, 10);
            if (norm(x) > 10) x *= 10.0 / norm(x);
            worst = std::max(worst, max_abs_diff(jacobian(f, x, JacobianMode::Analytic),
                                                 jacobian(f, x, JacobianMode::FiniteDifference)));
        }
        INFO(id);
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("jacobian error paths") {
    CHECK_THROWS_AS(builtin_field("lorenz"), DomainError);
    VectorField no_analytic{"anon", [](const StateVec& x) { return x; }, {}};
    CHECK_THROWS_AS(jacobian(no_analytic, {1, 1, 1}, JacobianMode::Analytic), DomainError);
    VectorField bad{"bad", [](const StateVec&) { return StateVec{NAN, 0, 0}; }, {}};
    CHECK_THROWS_AS(jacobian(bad, {1, 1, 1}, JacobianMode::FiniteDifference), DomainError);
    // The table-metric variant has no closed form but finite differences work.
    const VectorField t = builtin_field("metriplectic-second-table");
    CHECK_THROWS_AS(jacobian(t, {1, 2, 3}, JacobianMode::Analytic), DomainError);
    CHECK(jacobian(t, {1, 2, 3}, JacobianMode::FiniteDifference).finite());
}

TEST_CASE("conserved quantities are first integrals of the classical field") {
    std::mt19937_64 rng(11);
    const QuadraticFn fns[] = {ham_h1(), casimir_c1(), plane_invariant()};
    for (int i = 0; i < 200; ++i) {
        StateVec x = random_state(rng, -1000, 1000);
        if (norm(x) > 1000) x *= 1000 / norm(x);
        const StateVec f = rabinovich_field(x);
        for (const auto& q : fns) {
            const StateVec g = q.grad_x(x);
            const double scale = std::max(1e-300, norm(g) * norm(f));
            CHECK(std::abs(dot(g, f)) / scale < 1e-12);
        }
    }
}

TEST_CASE("RK4 keeps equilibria fixed") {
    for (const auto& id : builtin_field_ids()) {
        const VectorField f = builtin_field(id);
        const StateVec e = {0, 0, 1.3};  // E3 is stationary for every built-in field
        const Trajectory tr = integrate_rk4(f, e, 1e-2, 100);
        for (const auto& s : tr.states()) CHECK(s == e);
    }
    const Trajectory tr = integrate_rk4(builtin_field("classical"), {2, 0, 0}, 0.1, 10);
    for (const auto& s : tr.states()) CHECK(s == StateVec{2, 0, 0});
}

TEST_CASE("RK4 conserves h1 along the classical flow and records monitors") {
    const Trajectory tr = integrate_rk4(builtin_field("classical"), {1, 2, 3}, 1e-3, 100000,
                                        {{"h1", ham_h1()}, {"c1", casimir_c1()}});
    CHECK(tr.size() == 100001);
    const auto& h = tr.monitor("h1");
    double drift = 0.0;
    for (double v : h) drift = std::max(drift, std::abs(v - h.front()) / std::abs(h.front()));
    CHECK(drift < 1e-7);
    CHECK_THROWS_AS(tr.monitor("nope"), std::out_of_range);
}

TEST_CASE("RK4 is fourth order (Richardson self-convergence)") {
    const VectorField f = builtin_field("classical");
    auto end = [&](double dt) { return integrate_rk4(f, {1, 2, 3}, dt, std::lround(1.0 / dt)).back(); };
    const StateVec a = end(0.02), b = end(0.01), c = end(0.005);
    const double ratio = norm(a - b) / norm(b - c);
    INFO(ratio);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("RK4 reports the failing step on blow-up") {
    VectorField blow{"blowup", [](const StateVec& x) { return StateVec{x[0] * x[0] * x[0], 0, 0}; }, {}};
    try {
        integrate_rk4(blow, {10, 0, 0}, 0.1, 1000);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.step() > 0);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
    CHECK_THROWS_AS(integrate_rk4(blow, {1, 0, 0}, 0.0, 10), DomainError);
    CHECK_THROWS_AS(integrate_rk4(blow, {1, 0, 0}, 0.1, 0), DomainError);
}

TEST_CASE("heteroclinic sign triples") {
    const auto& v = valid_heteroclinic_signs();
    REQUIRE(v.size() == 4);
    for (const auto& s : v) CHECK(s.s2 == -s.s1 * s.s3);
    CHECK(std::find(v.begin(), v.end(), SignTriple{1, 1, 1}) == v.end());
    try {
        heteroclinic_orbit(1.0, {1, 1, 1}, 0.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("(1,-1,1)") != std::string::npos);
    }
    CHECK_THROWS_AS(heteroclinic_orbit(0.0, v.front(), 0.0), DomainError);
}

TEST_CASE("heteroclinic orbits solve the classical system") {
    for (const auto& s : valid_heteroclinic_signs()) {
        const StateVec p0 = heteroclinic_orbit(1.0, s, 0.0);
        CHECK(std::abs(p0[0]) == 1.0);
        CHECK(p0[1] == 0.0);
        CHECK(std::abs(p0[2]) == std::abs(p0[0]));  // on a plane x3 = ±x1
        CHECK(sup_norm(heteroclinic_orbit(1.0, s, 30.0) - StateVec{0, double(s.s2), 0}) < 1e-10);
        CHECK(sup_norm(heteroclinic_orbit(1.0, s, -30.0) - StateVec{0, double(-s.s2), 0}) < 1e-10);
        for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            const StateVec r = heteroclinic_velocity(1.0, s, t) - rabinovich_field(heteroclinic_orbit(1.0, s, t));
            CHECK(sup_norm(r) < 1e-12);
        }
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> um(-5, 5), ut(-5, 5);
    for (int i = 0; i < 100; ++i) {
        double m = um(rng);
        if (std::abs(m) < 1e-3) m = 1.0;
        const double t = ut(rng);
        for (const auto& s : valid_heteroclinic_signs()) {
            const StateVec r = heteroclinic_velocity(m, s, t) - rabinovich_field(heteroclinic_orbit(m, s, t));
            CHECK(sup_norm(r) < 1e-12);
        }
    }
}

TEST_CASE("heteroclinic velocity matches a finite difference of the closed form") {
    const SignTriple s = valid_heteroclinic_signs().front();
    for (double t : {-1.5, 0.3, 2.0}) {
        const double h = 1e-5;
        const StateVec fd = (heteroclinic_orbit(1.3, s, t + h) - heteroclinic_orbit(1.3, s, t - h)) * (0.5 / h);
        CHECK(sup_norm(fd - heteroclinic_velocity(1.3, s, t)) < 1e-8);
    }
}

TEST_CASE("small-oscillation period near E1") {
    const double p1 = measure_period({1, 0, 0.01}, 1e-3, 50);
    CHECK(std::abs(p1 - 2 * std::numbers::pi) / (2 * std::numbers::pi) < 0.01);
    const double p2 = measure_period({2, 0, 0.01}, 1e-3, 50);
    CHECK(std::abs(p2 - p1 / 2) / (p1 / 2) < 0.01);
    CHECK_THROWS_AS(measure_period({1, 0, 0}, 1e-3, 50), DomainError);
    CHECK_THROWS_AS(measure_period({0, 0, 0.1}, 1e-3, 50), DomainError);
}

TEST_CASE("trajectory invariants") {
    CHECK_THROWS_AS(Trajectory(0, 0.0, {StateVec{}}), DomainError);
    CHECK_THROWS_AS(Trajectory(0, 0.1, {}), DomainError);
    Trajectory t(0, 0.1, {StateVec{}, StateVec{}});
    CHECK_THROWS_AS(t.add_monitor("h", {1.0}), DomainError);
    t.add_monitor("h", {1.0, 2.0});
    CHECK(t.time(1) == doctest::Approx(0.1));
}
