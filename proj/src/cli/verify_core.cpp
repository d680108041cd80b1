#include <cmath>
#include <numbers>

#include "rabinovich/core_dynamics.hpp"
#include "verify_internal.hpp"

namespace rabinovich::cli::detail {

void verify_core(Recorder& r, std::uint64_t seed) {
    auto rng = suite_rng(seed, "core");
    const VectorField classical = builtin_field("classical");

    double worst = 0;
    for (auto k : {EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3})
        for (double m : {-2.0, -0.5, 0.5, 1.0, 2.0}) worst = std::max(worst, sup_norm(rabinovich_field(equilibrium_point({k, m}))));
    r.bound("core.equilibria-stationary", worst, 0.0, "classical system: equilibrium families");

    worst = 0;
    const QuadraticFn integrals[] = {ham_h1(), casimir_c1(), plane_invariant()};
    for (int i = 0; i < 1000; ++i) {
        StateVec x = uniform_point(rng, -1000, 1000);
        const StateVec f = rabinovich_field(x);
        for (const auto& q : integrals) {
            const StateVec g = q.grad_x(x);
            const double scale = norm(g) * norm(f);
            if (scale > 0) worst = std::max(worst, std::abs(dot(g, f)) / scale);
        }
    }
    r.bound("core.first-integrals", worst, 1e-12, "classical system: h1, c1, x1^2 - x3^2 conserved",
            "relative |grad q . X| / (|grad q| |X|), 1000 points in [-1e3,1e3]^3");

    {
        const Trajectory tr = integrate_rk4(classical, {1, 2, 3}, 1e-3, 100000,
                                            {{"h1", ham_h1()}, {"c1", casimir_c1()}, {"h3", plane_invariant()}});
        double drift = 0;
        for (const char* name : {"h1", "c1", "h3"}) {
            const auto& v = tr.monitor(name);
            for (double q : v) drift = std::max(drift, std::abs(q - v.front()) / std::abs(v.front()));
        }
        r.bound("core.rk4-conservation", drift, 1e-7, "classical system: conserved quantities under RK4",
                "dt=1e-3, T=100, x0=(1,2,3)");
    }

    {
        auto end = [&](double dt) { return integrate_rk4(classical, {1, 2, 3}, dt, std::lround(1.0 / dt)).back(); };
        const StateVec a = end(0.02), b = end(0.01), c = end(0.005);
        const double ratio = norm(a - b) / norm(b - c);
        r.bound("core.rk4-order", std::abs(ratio - 16.0), 2.0, "RK4 fourth-order self-convergence",
                "Richardson ratio " + sci(ratio) + " (ideal 16)");
    }

    worst = 0;
    for (const auto& id : builtin_field_ids()) {
        const VectorField f = builtin_field(id);
        if (!f.analytic_jacobian) continue;
        for (int i = 0; i < 100; ++i) {
            StateVec x = uniform_point(rng, -10, 10);
            if (norm(x) > 10) x *= 10 / norm(x);
            worst = std::max(worst, max_abs_diff(jacobian(f, x, JacobianMode::Analytic),
                                                 jacobian(f, x, JacobianMode::FiniteDifference)));
        }
    }
    r.bound("core.jacobian-analytic-vs-fd", worst, 1e-6, "analytic Jacobians of all built-in fields");

    worst = 0;
    for (double m : {0.5, 1.0, 2.0})
        for (const auto& s : valid_heteroclinic_signs())
            for (int i = 0; i < 100; ++i) {
                const double t = uniform(rng, -5, 5);
                worst = std::max(worst, sup_norm(heteroclinic_velocity(m, s, t) - rabinovich_field(heteroclinic_orbit(m, s, t))));
            }
    r.bound("core.heteroclinic-residual", worst, 1e-12, "classical system: closed-form heteroclinic orbits",
            "m in {0.5,1,2}, all valid sign triples, 100 times in [-5,5]");

    worst = 0;
    for (double m : {0.5, 1.0, 2.0})
        for (const auto& s : valid_heteroclinic_signs()) {
            const Trajectory tr = integrate_rk4(classical, heteroclinic_orbit(m, s, -5.0), 1e-4, 100000);
            for (std::size_t i = 0; i < tr.size(); i += 100)
                worst = std::max(worst, sup_norm(tr.states()[i] - heteroclinic_orbit(m, s, -5.0 + tr.time(i))));
        }
    r.bound("core.heteroclinic-shadowing", worst, 1e-3, "classical system: closed-form heteroclinic orbits",
            "RK4 from t=-5 to t=5, dt=1e-4");

    double rel = 0, factor = 0;
    for (double m : {1.0, 2.0, -1.5}) {
        const double p = measure_period({m, 0, 0.01 * std::abs(m)}, 1e-3, 50);
        rel = std::max(rel, std::abs(p - 2 * std::numbers::pi / std::abs(m)) / (2 * std::numbers::pi / std::abs(m)));
        factor = std::max(factor, p / (std::numbers::pi / std::abs(m)));
    }
    r.bound("core.period-near-e1", rel, 0.01, "linearization at (m,0,0): eigenvalues +-im give period 2pi/|m|",
            "m in {1, 2, -1.5}");
    r.discrepancy("core.period-printed-claim", std::abs(factor - 1.0), 0.01,
                  "printed claim: periodic solution near (m,0,0) with period close to pi/|m|",
                  "measured period / (pi/|m|) = " + sci(factor));
}

}  // namespace rabinovich::cli::detail
