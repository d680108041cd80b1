#include <cmath>
#include <limits>
#include <numbers>

#include "rabinovich/fractional.hpp"
#include "rabinovich/stability.hpp"
#include "verify_internal.hpp"

namespace rabinovich::cli::detail {

namespace {

double sup_gap(const Trajectory& a, const Trajectory& b) {
    double worst = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        worst = std::max(worst, sup_norm(a.states()[i] - b.states()[i]));
    return worst;
}

}  // namespace

void verify_fractional(Recorder& r, std::uint64_t seed) {
    auto rng = suite_rng(seed, "fractional");
    const VectorField classical = builtin_field("classical");

    // Γ: tabulated values and the recurrence Γ(x+1) = xΓ(x).
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const std::pair<double, double> table[] = {{0.5, sqrt_pi}, {1.0, 1.0}, {1.5, sqrt_pi / 2}, {2.0, 1.0},
                                               {2.5, 0.75 * sqrt_pi}, {3.0, 2.0},
                                               {1.0 / 3.0, 2.6789385347077476337}, {0.1, 9.5135076986687318397}};
    double gerr = 0;
    for (const auto& [x, g] : table) gerr = std::max(gerr, std::abs(std::tgamma(x) - g) / g);
    for (int i = 0; i < 200; ++i) {
        const double x = uniform(rng, 0.01, 2.0);
        gerr = std::max(gerr, std::abs(std::tgamma(x + 1) - x * std::tgamma(x)) / std::tgamma(x + 1));
    }
    r.bound("fractional.gamma", gerr, 1e-14, "Gamma function accuracy on (0,3]", "relative error");

    double rl = 0;
    bool monotone = true;
    for (double beta : {0.3, 0.5, 0.8}) {
        rl = std::max(rl, std::abs(rl_integral([](double) { return 1.0; }, beta, 1.0) - 1.0 / std::tgamma(beta + 1)));
        const double exact = std::pow(2.0, 1 + beta) / std::tgamma(2 + beta);
        double prev = 1e300;
        for (long n : {50L, 100L, 200L, 400L, 800L}) {
            const double err = std::abs(rl_integral([](double s) { return s; }, beta, 2.0, n) - exact);
            monotone = monotone && err < prev;
            prev = err;
        }
        rl = std::max(rl, prev);
    }
    r.verdict("fractional.rl-integral", monotone && rl < 1e-2, rl, 1e-2,
              "Riemann-Liouville integral against t^b/Gamma(b+1) and t^(1+b)/Gamma(2+b)",
              monotone ? "errors decrease monotonically under refinement" : "refinement not monotone");

    double w1 = 0;
    const double h = 1e-3;
    for (long j : {0L, 1L, 7L, 100L}) {
        const AbmWeightRow row = abm_weights(FracOrder(1.0), h, j);
        for (double b : row.b) w1 = std::max(w1, std::abs(b - h));
        for (std::size_t i = 0; i < row.a.size(); ++i) {
            const double want = (i == 0 || i + 1 == row.a.size()) ? h / 2 : h;
            w1 = std::max(w1, std::abs(row.a[i] - want));
        }
    }
    r.bound("fractional.weights-alpha1", w1, 0.0, "at alpha = 1 the weights are rectangle (b) and trapezoid (a) weights");

    double neg = -std::numeric_limits<double>::infinity();
    for (double al : {0.05, 0.3, 0.5, 0.8, 0.95, 1.0}) {
        const AbmWeightRow row = abm_weights(FracOrder(al), 1.0, 10000);
        for (double v : row.a) neg = std::max(neg, -v);
        for (double v : row.b) neg = std::max(neg, -v);
        for (long j = 0; j <= 10000; ++j)
            neg = std::max(neg, -(std::pow(double(j), al + 1) - (j - al) * std::pow(j + 1.0, al)));
    }
    r.verdict("fractional.weights-positive", neg < 0, neg, 0.0, "all predictor and corrector weights are positive",
              "measured = -min weight over alpha grid, j <= 1e4");

    double eq = 0;
    for (double al : {0.3, 0.8, 1.0}) {
        const FracTrajectory ft = integrate_abm(classical, {2, 0, 0}, FracOrder(al), 0.01, 300);
        for (const auto& s : ft.traj.states()) eq = std::max(eq, sup_norm(s - StateVec{2, 0, 0}));
    }
    r.bound("fractional.equilibria", eq, 0.0, "equilibria are fixed for every alpha");

    double oracle = 0;
    for (const StateVec& x0 : {StateVec{0.001, 0.001, 6}, StateVec{1, 2, 3}, StateVec{0.5, -0.4, 0.3}})
        oracle = std::max(oracle, sup_gap(integrate_abm(classical, x0, FracOrder(1.0), 1e-3, 10000).traj,
                                          integrate_rk4(classical, x0, 1e-3, 10000)));
    r.bound("fractional.alpha1-vs-rk4", oracle, 1e-3, "at alpha = 1 the scheme is a classical PECE method",
            "dt=1e-3, T=10, three initial conditions including (0.001,0.001,6)");

    const FracTrajectory mem = integrate_abm(classical, {0.3, 0.2, 1.1}, FracOrder(0.7), 0.01, 400);
    double msum = 0;
    for (long j : {0L, 1L, 57L, 200L, 399L})
        msum = std::max(msum, sup_norm(abm_recompute_step(mem, j) - mem.traj.states()[static_cast<std::size_t>(j) + 1]));
    r.bound("fractional.memory-sums", msum, 1e-13, "running memory sums equal recomputation from scratch");

    const StateVec fig{0.001, 0.001, 6};
    const FracTrajectory f1 = integrate_abm(classical, fig, FracOrder(0.8), 1e-3, 50000, {{"c1", casimir_c1()}});
    double sup = 0;
    for (const auto& s : f1.traj.states()) sup = std::max(sup, sup_norm(s));
    const auto& c = f1.traj.monitor("c1");
    r.bound("fractional.alpha08-bounded", sup, 10 * norm(fig), "alpha = 0.8 scenario from (0.001,0.001,6) stays bounded",
            "dt=1e-3, T=50; x2^2+x3^2 from " + sci(2 * c.front()) + " to " + sci(2 * c.back()));

    std::vector<double> mean, final;
    for (double al : {0.7, 0.8, 0.9, 1.0}) {
        const FracTrajectory ft = integrate_abm(classical, fig, FracOrder(al), 5e-3, 2000, {{"h1", ham_h1()}});
        const auto& hv = ft.traj.monitor("h1");
        double d = 0;
        for (double v : hv) d += std::abs(v - hv.front()) / hv.front();
        mean.push_back(d / static_cast<double>(hv.size()));
        final.push_back(std::abs(hv.back() - hv.front()) / hv.front());
    }
    const bool trend = mean[0] > mean[1] && mean[1] > mean[2] && mean[2] > mean[3];
    r.verdict("fractional.drift-trend", trend, mean[3], 0.0,
              "h1 drift shrinks as alpha -> 1 (time-mean relative drift over T=10)",
              "mean " + sci(mean[0]) + ", " + sci(mean[1]) + ", " + sci(mean[2]) + ", " + sci(mean[3]) +
                  "; final " + sci(final[0]) + ", " + sci(final[1]) + ", " + sci(final[2]) + ", " + sci(final[3]) +
                  " for alpha 0.7, 0.8, 0.9, 1.0");

    DelayField ignore = [](const StateVec& x, const StateVec&) { return rabinovich_field(x); };
    const StateVec x0{0.4, 0.3, 1.0};
    r.bound("fractional.delay-unused",
            sup_gap(integrate_abm_delay(ignore, History::constant(x0), 0.5, x0, FracOrder(0.8), 0.01, 300).traj,
                    integrate_abm(classical, x0, FracOrder(0.8), 0.01, 300).traj),
            0.0, "delay variant with a field that ignores the delay equals the plain scheme");

    // Printed characteristic equations of the fractional classical system.
    const double m = 1.5;
    const FracOrder al(0.8);
    const Kernel unused = Kernel::dirac(1.0);
    auto gap_at = [&](EquilibriumKind k) {
        double g = 0;
        for (Complex lam : {Complex(0.7, 0.4), Complex(1.2, 0.9), Complex(0.3, 2.0)}) {
            const LinearizationPair lp{rabinovich_jacobian(equilibrium_point({k, m})), Mat3{}};
            g = std::max(g, std::abs(char_fn(lp, unused, al, lam) - printed_fractional_char_fn({k, m}, al, lam)));
        }
        return g;
    };
    r.discrepancy("fractional.charpoly-E1-factor", gap_at(EquilibriumKind::E1), 1e-9,
                  "printed characteristic equation of the fractional system at (m,0,0)",
                  "printed mu(-mu^2 + m^2(m+1)) carries the (m+1) of the printed first-kind metriplectic system; computed mu(mu^2 + m^2), mu = lambda^alpha");
    r.discrepancy("fractional.charpoly-E2-form", gap_at(EquilibriumKind::E2), 1e-9,
                  "printed characteristic equation of the fractional system at (0,m,0)",
                  "printed mu(mu^2 + m^2 lambda^2 - m^2) mixes lambda^2 into the mu polynomial; computed mu(mu^2 - m^2)");
    r.bound("fractional.charpoly-E3", gap_at(EquilibriumKind::E3), 1e-12,
            "printed characteristic equation of the fractional system at (0,0,m)");

    const double tau = 0.5;
    double eg = 0;
    for (Complex lam : {Complex(0.7, 0.4), Complex(1.2, 0.9)})
        eg = std::max(eg, std::abs(std::exp(-std::pow(lam, al.value()) * tau) - std::exp(-lam * tau)));
    r.discrepancy("fractional.delay-exponent", eg, 1e-9,
                  "printed characteristic equations of the fractional delay system use exp(-lambda^alpha tau)",
                  "the Laplace transform of the Dirac kernel gives exp(-lambda tau); computed Delta uses the latter");
}

}  // namespace rabinovich::cli::detail
