#include <cmath>

#include "rabinovich/metriplectic.hpp"
#include "verify_internal.hpp"

namespace rabinovich::cli::detail {

namespace {

QuadraticFn random_quadratic(std::mt19937_64& rng) {
    Mat6 q{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) q[i][j] = q[j][i] = uniform(rng, -1, 1);
    Coeff6 b{};
    for (std::size_t i = 0; i < 3; ++i) b[i] = uniform(rng, -1, 1);
    return QuadraticFn::from_matrix(q, b, 0.0);
}

struct FlowStats {
    double casimir_drift = 0;
    double worst_decrease = 0;
    double h_gain = 0;
};

FlowStats second_kind_flow(const char* id) {
    const Trajectory tr = integrate_rk4(builtin_field(id), {0.3, 0.2, 0.1}, 1e-3, 20000,
                                        {{"h1", ham_h1()}, {"c1", casimir_c1()}});
    const auto& c = tr.monitor("c1");
    const auto& h = tr.monitor("h1");
    FlowStats s;
    for (std::size_t i = 1; i < tr.size(); ++i) {
        s.casimir_drift = std::max(s.casimir_drift, std::abs(c[i] - c[0]));
        s.worst_decrease = std::max(s.worst_decrease, h[i - 1] - h[i]);
    }
    s.h_gain = h.back() - h.front();
    return s;
}

}  // namespace

void verify_metriplectic(Recorder& r, std::uint64_t seed) {
    auto rng = suite_rng(seed, "metriplectic");

    double annihil = 0, asym = 0;
    for (int i = 0; i < 1000; ++i) {
        const StateVec x = uniform_point(rng, -5, 5);
        const QuadraticFn h = (i % 2) ? random_quadratic(rng) : ham_h1();
        const Mat3 g = build_metric_first_kind(h, x);
        annihil = std::max(annihil, sup_norm(g * h.grad_x(x)));
        asym = std::max(asym, max_abs_diff(g, g.transpose()));
    }
    r.bound("metriplectic.first-kind-annihilates", annihil, 1e-12, "first-kind metric built from grad h satisfies g grad h = 0",
            "1000 points in [-5,5]^3, h1 and random quadratics");
    r.bound("metriplectic.first-kind-symmetric", asym, 0.0, "first-kind metric is symmetric");

    double cs = 0;
    for (int i = 0; i < 1000; ++i) {
        const StateVec x = uniform_point(rng, -5, 5);
        const QuadraticFn h = random_quadratic(rng), c = random_quadratic(rng);
        const StateVec a = h.grad_x(x), b = c.grad_x(x);
        const Mat3 g = build_metric_second_kind(h, c, x);
        const StateVec oracle = dot(b, b) * a - dot(a, b) * b;
        cs = std::max(cs, sup_norm(g * b - oracle) / (1 + norm(a) * dot(b, b)));
    }
    r.bound("metriplectic.second-kind-identity", cs, 1e-12, "second-kind metric: g grad c = |grad c|^2 grad h - (grad h . grad c) grad c",
            "relative to 1 + |grad h| |grad c|^2");

    for (const char* id : {"metriplectic-second", "metriplectic-second-sym"}) {
        const FlowStats s = second_kind_flow(id);
        const std::string tag = std::string(id) == "metriplectic-second" ? "second-kind" : "second-kind-symmetrized";
        r.bound("metriplectic." + tag + "-casimir", s.casimir_drift, 1e-7, "second-kind flow keeps the Casimir c1",
                "RK4 dt=1e-3, T=20, x0=(0.3,0.2,0.1)");
        r.bound("metriplectic." + tag + "-h-nondecreasing", s.worst_decrease, 1e-10,
                "second-kind flow does not decrease h1", "largest per-step decrease; total gain " + sci(s.h_gain));
    }

    double jerr = 0;
    const MetriplecticSystem systems[] = {first_kind_system(), second_kind_system(),
                                          second_kind_system(MetricKind::SecondKindSymmetric)};
    for (int i = 0; i < 100; ++i) {
        const StateVec x = uniform_point(rng, -3, 3);
        for (const auto& s : systems) {
            VectorField f{"m", [&](const StateVec& y) { return metriplectic_field(s, y); }, {}};
            jerr = std::max(jerr, max_abs_diff(metriplectic_jacobian(s, x), jacobian(f, x, JacobianMode::FiniteDifference)));
        }
    }
    r.bound("metriplectic.jacobian-analytic-vs-fd", jerr, 1e-6, "closed-form metriplectic Jacobians");

    // Printed first-kind system against the general first-kind formula with its own tabulated metric.
    double lit = 0;
    for (int i = 0; i < 100; ++i) {
        const StateVec x = uniform_point(rng, -2, 2);
        const StateVec own = tensor_p1().eval(x) * ham_h1().grad_x(x) + metric_table_38(x) * ham_h1().grad_x(x);
        lit = std::max(lit, sup_norm(literal_system_38(x) - own));
    }
    r.discrepancy("metriplectic.literal38-vs-own-metric", lit, 1e-9,
                  "printed first-kind metriplectic system vs the general first-kind formula with its printed metric",
                  "the printed metric annihilates grad h1, so the formula gives the classical field; the printed system adds x1x2(x1-x2) and x1^2");

    const double m = 1.5;
    r.discrepancy("metriplectic.literal38-e1-not-stationary", sup_norm(literal_system_38({m, 0, 0})), 1e-12,
                  "printed equilibrium family (m,0,0) of the printed first-kind system",
                  "field at (1.5,0,0) is (0, m^2, 0); the x1^2 term is nonzero there");

    Mat3 printed;
    printed_linear_part("literal38", {EquilibriumKind::E1, m}, printed);
    r.discrepancy("metriplectic.literal38-A1", max_abs_diff(printed, literal_system_38_jacobian({m, 0, 0})), 1e-12,
                  "printed linear part A1 of the first-kind system at (m,0,0)",
                  "computed row 2 is (2m, 0, -m), printed (0, 0, m^2+m); at m=1.5");
    for (auto [kind, name] : {std::pair{EquilibriumKind::E2, "A2"}, std::pair{EquilibriumKind::E3, "A3"}}) {
        printed_linear_part("literal38", {kind, m}, printed);
        const Mat3 j = literal_system_38_jacobian(equilibrium_point({kind, m}));
        r.bound(std::string("metriplectic.literal38-") + name, max_abs_diff(printed, j), 0.0,
                std::string("printed linear part ") + name + " of the first-kind system");
    }
    Cubic pc;
    for (auto kind : {EquilibriumKind::E2, EquilibriumKind::E3}) {
        printed_char_poly("literal38", {kind, m}, pc);
        const Cubic c = characteristic_polynomial(literal_system_38_jacobian(equilibrium_point({kind, m})));
        double d = 0;
        for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(c[k] - pc[k]));
        r.bound(std::string("metriplectic.literal38-charpoly-") + to_string(kind), d, 1e-12,
                "printed characteristic equation of the first-kind system");
    }

    double g33 = 0, g_other = 0;
    for (int i = 0; i < 100; ++i) {
        const StateVec x = uniform_point(rng, -2, 2);
        const Mat3 table = metric_table_10(x), formula = build_metric_second_kind(ham_h1(), casimir_c1(), x);
        g33 = std::max(g33, std::abs(table(2, 2) - formula(2, 2)));
        Mat3 t2 = table, f2 = formula;
        t2(2, 2) = f2(2, 2) = 0;
        g_other = std::max(g_other, max_abs_diff(t2, f2));
    }
    r.discrepancy("metriplectic.g33", g33, 1e-12, "printed second-kind metric component g33 vs the second-kind formula",
                  "formula gives g33 = -x2^2, printed 0; the other eight entries agree to " + sci(g_other));

    double l10 = 0;
    for (int i = 0; i < 100; ++i) {
        const StateVec x = uniform_point(rng, -2, 2);
        const StateVec own = tensor_p1().eval(x) * ham_h1().grad_x(x) + metric_table_10(x) * casimir_c1().grad_x(x);
        l10 = std::max(l10, sup_norm(literal_system_10(x) - own));
    }
    r.discrepancy("metriplectic.literal10-x2-term", l10, 1e-9,
                  "printed second-kind system vs the second-kind formula with its printed metric",
                  "second component: printed x2x3, derived x2x3^2");

    for (auto kind : {EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3}) {
        printed_linear_part("literal10", {kind, m}, printed);
        r.bound(std::string("metriplectic.literal10-linear-part-") + to_string(kind),
                max_abs_diff(printed, literal_system_10_jacobian(equilibrium_point({kind, m}))), 0.0,
                "printed linear part of the second-kind system");
    }
    for (auto kind : {EquilibriumKind::E1, EquilibriumKind::E2}) {
        printed_char_poly("literal10", {kind, m}, pc);
        const Cubic c = characteristic_polynomial(literal_system_10_jacobian(equilibrium_point({kind, m})));
        double d = 0;
        for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(c[k] - pc[k]));
        r.bound(std::string("metriplectic.literal10-charpoly-") + to_string(kind), d, 1e-12,
                "printed characteristic equation of the second-kind system");
    }
    printed_char_poly("literal10", {EquilibriumKind::E3, m}, pc);
    const Cubic c3 = characteristic_polynomial(literal_system_10_jacobian({0, 0, m}));
    r.discrepancy("metriplectic.literal10-charpoly-E3", std::abs(c3[1] - pc[1]), 1e-12,
                  "printed characteristic equation of the second-kind system at (0,0,m)",
                  "linear coefficient: printed m^2, from the printed A3 m^3 + m^2; at m=1.5");
}

}  // namespace rabinovich::cli::detail
