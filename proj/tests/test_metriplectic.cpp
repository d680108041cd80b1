#include <cmath>

#include "doctest.h"
#include "rabinovich/core_dynamics.hpp"
#include "rabinovich/metriplectic.hpp"
#include "test_support.hpp"

using namespace rabinovich;
using rabinovich::testing::random_quadratic;
using rabinovich::testing::random_state;

TEST_CASE("first-kind metric at a sample point") {
    Mat3 want;
    want(0, 0) = -4;
    want(0, 1) = want(1, 0) = 2;
    want(1, 1) = -1;
    want(2, 2) = -5;
    CHECK(build_metric_first_kind(ham_h1(), {1, 2, 3}) == want);
    CHECK(build_metric_first_kind(ham_h1(), {0, 0, 7}) == Mat3{});
}

TEST_CASE("first-kind metric annihilates the gradient it is built from") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const QuadraticFn h = random_quadratic(rng);
        const StateVec x = random_state(rng, -3, 3);
        const StateVec a = h.grad_x(x);
        const Mat3 g = build_metric_first_kind(h, x);
        CHECK(sup_norm(g * a) < 1e-12 * (1 + dot(a, a) * norm(a)));
        CHECK(g == g.transpose());
    }
}

TEST_CASE("second-kind metric identity and sign") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 100; ++i) {
        const QuadraticFn h = random_quadratic(rng), c = random_quadratic(rng);
        const StateVec x = random_state(rng, -3, 3);
        const StateVec a = h.grad_x(x), b = c.grad_x(x);
        const Mat3 g = build_metric_second_kind(h, c, x);
        // g b = |b|² a − (a·b) b
        const StateVec oracle = dot(b, b) * a - dot(a, b) * b;
        CHECK(sup_norm(g * b - oracle) < 1e-11 * (1 + norm(a) * dot(b, b)));
        // ∇h·g∇c is a Cauchy-Schwarz gap and therefore nonnegative, ∇c·g∇c vanishes
        CHECK(dot(a, g * b) >= -1e-10);
        CHECK(std::abs(dot(b, g * b)) < 1e-10 * (1 + dot(b, b) * norm(a) * norm(b)));
    }
    CHECK(build_metric_second_kind(ham_h1(), casimir_c1(), {5, 0, 0}) == Mat3{});
}

TEST_CASE("metriplectic fields at a sample point") {
    CHECK(metriplectic_field(first_kind_system(), {1, 2, 3}) == StateVec{6, -3, 2});
    // P∇h = (6,−3,2); g∇c = 13(1,2,0) − 4(0,2,3) = (13,18,−12)
    CHECK(metriplectic_field(second_kind_system(), {1, 2, 3}) == StateVec{19, 15, -10});
    CHECK(metriplectic_field(second_kind_system(MetricKind::SecondKindSymmetric), {1, 2, 3}) ==
          StateVec{12.5, 6, -4});
    CHECK_THROWS_AS(second_kind_system(MetricKind::FirstKind), DomainError);
}

TEST_CASE("literal systems at sample points") {
    CHECK(literal_system_38({1, 1, 1}) == StateVec{1, 0, 1});
    CHECK(literal_system_38({2, 0, 0}) == StateVec{0, 4, 0});
    CHECK(literal_system_38({0, 0, 2}) == StateVec{0, 0, 0});
    CHECK(literal_system_10({1, 1, 1}) == StateVec{3, 0, 1});
    CHECK(literal_system_10({1, 2, 3}) == StateVec{19, 3, 2});
    CHECK(literal_system_10({0, 2, 0}) == StateVec{0, 0, 0});
}

TEST_CASE("characteristic polynomials at equilibria") {
    for (double m : {-2.0, -0.5, 1.0, 3.0}) {
        const double m2 = m * m;
        CHECK(char_poly_at_equilibrium(builtin_field("classical"), {EquilibriumKind::E2, m}) == Cubic{0, -m2, 0, 1});
        CHECK(char_poly_at_equilibrium(builtin_field("classical"), {EquilibriumKind::E3, m}) == Cubic{0, m2, 0, 1});
        CHECK(char_poly_at_equilibrium(builtin_field("literal10"), {EquilibriumKind::E1, m}) == Cubic{0, m2, 0, 1});
        Cubic printed;
        REQUIRE(printed_char_poly("literal10", {EquilibriumKind::E2, m}, printed));
        CHECK(char_poly_at_equilibrium(builtin_field("literal10"), {EquilibriumKind::E2, m}) == printed);
    }
    try {
        char_poly_at_equilibrium(builtin_field("literal38"), {EquilibriumKind::E1, 2.0});
        FAIL("expected NotStationaryError");
    } catch (const NotStationaryError& e) {
        CHECK(e.residual() == StateVec{0, 4, 0});
    }
}

TEST_CASE("characteristic polynomial matches eigenvalue products") {
    Mat3 j;
    j(0, 0) = 2;
    j(1, 1) = 3;
    j(2, 2) = 5;
    j(0, 1) = 7;  // triangular: eigenvalues 2, 3, 5
    CHECK(characteristic_polynomial(j) == Cubic{-30, 31, -10, 1});
}

TEST_CASE("metriplectic Jacobians agree with finite differences") {
    std::mt19937_64 rng(47);
    const MetriplecticSystem systems[] = {first_kind_system(), second_kind_system(),
                                          second_kind_system(MetricKind::SecondKindSymmetric)};
    for (int i = 0; i < 30; ++i) {
        const StateVec x = random_state(rng, -3, 3);
        for (const auto& s : systems) {
            VectorField f{"m", [&](const StateVec& y) { return metriplectic_field(s, y); }, {}};
            CHECK(max_abs_diff(metriplectic_jacobian(s, x), jacobian(f, x, JacobianMode::FiniteDifference)) < 1e-6);
        }
        VectorField l38{"l", literal_system_38, {}}, l10{"l", literal_system_10, {}};
        CHECK(max_abs_diff(literal_system_38_jacobian(x), jacobian(l38, x, JacobianMode::FiniteDifference)) < 1e-6);
        CHECK(max_abs_diff(literal_system_10_jacobian(x), jacobian(l10, x, JacobianMode::FiniteDifference)) < 1e-6);
    }
    CHECK_THROWS_AS(metriplectic_jacobian(second_kind_system(MetricKind::TableSecond10), {1, 2, 3}), DomainError);
}

TEST_CASE("second-kind flow keeps the Casimir and raises the Hamiltonian") {
    const auto flow = [](MetricKind k) {
        return integrate_rk4(builtin_field(k == MetricKind::SecondKind ? "metriplectic-second" : "metriplectic-second-sym"),
                             {0.3, 0.2, 0.1}, 1e-3, 2000, {{"h1", ham_h1()}, {"c1", casimir_c1()}});
    };
    for (auto k : {MetricKind::SecondKind, MetricKind::SecondKindSymmetric}) {
        const Trajectory tr = flow(k);
        const auto& c = tr.monitor("c1");
        const auto& h = tr.monitor("h1");
        for (std::size_t i = 1; i < tr.size(); ++i) {
            CHECK(std::abs(c[i] - c[0]) < 1e-7);
            CHECK(h[i] >= h[i - 1] - 1e-10);
        }
        CHECK(h.back() > h.front());
    }
}

TEST_CASE("first-kind flow coincides with the classical flow") {
    const Trajectory a = integrate_rk4(builtin_field("metriplectic-first"), {1, 2, 3}, 1e-3, 1000);
    const Trajectory b = integrate_rk4(builtin_field("classical"), {1, 2, 3}, 1e-3, 1000);
    CHECK(sup_norm(a.back() - b.back()) < 1e-12);
}
