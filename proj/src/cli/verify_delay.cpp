#include <cmath>

#include "rabinovich/delay.hpp"
#include "verify_internal.hpp"

namespace rabinovich::cli::detail {

namespace {

// Composite Simpson of k(s) e^{−λs} over the kernel's support, independent
// of the closed-form transforms.
double simpson_laplace(const Kernel& k, double lambda) {
    auto [lo, hi] = k.support(1e-14);
    const long n = 200000;
    const double h = (hi - lo) / n;
    double acc = 0;
    for (long i = 0; i <= n; ++i) {
        const double s = lo + h * static_cast<double>(i);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        // Evaluate just inside the closed support so uniform endpoints count.
        const double se = std::min(std::max(s, lo + 1e-15 * (1 + lo)), hi - 1e-15 * (1 + hi));
        acc += w * kernel_density(k, se) * std::exp(-lambda * s);
    }
    return acc * h / 3;
}

BlendWeights random_weights(std::mt19937_64& rng) {
    std::array<double, 4> e{}, d{};
    double se = 0, sd = 0;
    for (int i = 0; i < 4; ++i) {
        e[i] = uniform(rng, 0, 1);
        d[i] = uniform(rng, 0, 1);
        se += e[i];
        sd += d[i];
    }
    for (int i = 0; i < 4; ++i) {
        e[i] /= se;
        d[i] /= sd;
    }
    return {e, d};
}

StateVec expanded(const StateVec& x, const StateVec& t, const BlendWeights& w) {
    const double p = w.a1() * x[2] + w.a5() * t[2];
    const double r = w.b2() * x[0] + w.b3() * t[0];
    return {p * (w.b1() * x[1] + w.b4() * t[1]), -p * r, (w.a2() * x[1] + w.a4() * t[1]) * r};
}

double sup_gap(const Trajectory& a, const Trajectory& b) {
    double worst = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        worst = std::max(worst, sup_norm(a.states()[i] - b.states()[i]));
    return worst;
}

}  // namespace

void verify_delay(Recorder& r, std::uint64_t seed) {
    auto rng = suite_rng(seed, "delay");
    const Kernel smooth[] = {Kernel::uniform(0.5, 1.5), Kernel::exponential(2.0), Kernel::erlang(1.5)};

    double norm_err = 0, lap_err = 0, zero_err = 0;
    for (const auto& k : smooth) norm_err = std::max(norm_err, std::abs(simpson_laplace(k, 0.0) - 1.0));
    for (int i = 0; i < 20; ++i) {
        const double lam = uniform(rng, 0, 5);
        for (const auto& k : smooth) lap_err = std::max(lap_err, std::abs(simpson_laplace(k, lam) - kernel_laplace(k, lam).real()));
    }
    for (const auto& k : {smooth[0], smooth[1], smooth[2], Kernel::dirac(0.7)})
        zero_err = std::max(zero_err, std::abs(kernel_laplace(k, 0.0) - 1.0));
    r.bound("delay.kernel-normalization", norm_err, 1e-8, "kernels are probability densities",
            "Simpson quadrature, uniform/exponential/Erlang");
    r.bound("delay.kernel-laplace", lap_err, 1e-6, "closed-form Laplace transforms of the kernels",
            "20 random real lambda in [0,5]");
    r.bound("delay.kernel-laplace-at-zero", zero_err, 0.0, "Laplace transform at 0 equals 1");

    const History ex = History::function([](double s) { return StateVec{std::exp(s), 0, 0}; });
    const double a = 2.0;
    r.bound("delay.delayed-state-exponential", std::abs(delayed_state(ex, Kernel::exponential(a), 0.0)[0] - a / (a + 1)),
            1e-8, "delayed state of e^s under the exponential kernel is alpha/(alpha+1)");

    double cas = 0, expd = 0, red = 0, diag = 0;
    for (int i = 0; i < 500; ++i) {
        const StateVec x = uniform_point(rng, -3, 3), t = uniform_point(rng, -3, 3);
        const BlendWeights w = random_weights(rng);
        const StateVec gl = blended_casimir(w).grad_x(x, t);
        cas = std::max(cas, sup_norm(blended_tensor(w).eval(x, t).transpose() * gl));
        expd = std::max(expd, sup_norm(delay_hamiltonian_field(x, t, w) - expanded(x, t, w)));
        red = std::max(red, sup_norm(delay_hamiltonian_field(x, t, BlendWeights::no_delay()) - rabinovich_field(x)));
        diag = std::max(diag, sup_norm(delay_hamiltonian_field(x, x, w) - rabinovich_field(x)));
    }
    r.bound("delay.casimir-identity", cas, 1e-12, "grad_x l . P(x~,x) = 0 for the blended structure",
            "500 random (x, x~, weights)");
    r.bound("delay.expanded-field", expd, 1e-12, "expanded componentwise form of the delay Hamiltonian system");
    r.bound("delay.no-delay-reduction", red, 0.0, "eps = delta = (1,0,0,0) gives the classical field");
    r.bound("delay.equal-arguments", diag, 1e-12, "x~ = x gives the classical field for any weights");

    double rev = 0;
    for (int i = 0; i < 100; ++i) {
        const StateVec x = uniform_point(rng, -3, 3), t = uniform_point(rng, -3, 3);
        rev = std::max(rev, sup_norm(revised_delay_field(x, t, BlendWeights::no_delay()) - rabinovich_field(x)));
    }
    r.bound("delay.revised-no-delay-reduction", rev, 0.0, "constructed revised delay system at eps = delta = (1,0,0,0)");

    const StateVec xs{1, 2, 3}, ts{0.5, -1, 2};
    const double lit = sup_norm(revised_delay_field(xs, ts, BlendWeights::no_delay(), RevisedMode::Literal) - rabinovich_field(xs));
    r.discrepancy("delay.literal-revised-no-reduction", lit, 1e-9,
                  "printed revised delay system at eps = delta = (1,0,0,0)",
                  "does not reduce to the classical field at x=(1,2,3); extra terms x1x2x3 and -x1x3 survive");
    const BlendWeights w({0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1});
    r.discrepancy("delay.alpha4-vs-alpha5", sup_norm(revised_delay_field(xs, ts, w, RevisedMode::Literal) - revised_delay_field(xs, ts, w)),
                  1e-9, "printed revised delay system vs the system built from the blends",
                  "the printed form carries alpha4 where the blend gives alpha5 (alpha5 is defined but unused), plus the missing parenthesis and stray alpha2 x3 product; at x=(1,2,3), x~=(0.5,-1,2)");

    const BlendWeights bw({0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4});
    DelayField f = [&](const StateVec& x, const StateVec& t) { return delay_hamiltonian_field(x, t, bw); };
    double eq = 0;
    for (const Kernel& k : {Kernel::uniform(0.5, 1), Kernel::exponential(3), Kernel::erlang(2), Kernel::dirac(1)}) {
        const Trajectory tr = integrate_dde(f, k, History::constant({0, 0, 1.2}), 0.05, 3.0);
        for (const auto& s : tr.states()) eq = std::max(eq, sup_norm(s - StateVec{0, 0, 1.2}));
    }
    r.bound("delay.equilibrium-history", eq, 0.0, "constant history at an equilibrium gives a constant solution",
            "all four kernels");

    DelayField ignore = [](const StateVec& x, const StateVec&) { return rabinovich_field(x); };
    r.bound("delay.dirac-unused-delay",
            sup_gap(integrate_dde(ignore, Kernel::dirac(0.5), History::constant({1, 2, 3}), 0.01, 5.0),
                    integrate_rk4(builtin_field("classical"), {1, 2, 3}, 0.01, 500)),
            1e-10, "method of steps with a field that ignores the delay equals plain RK4");

    double lct = 0;
    for (const Kernel& k : {Kernel::exponential(2.0), Kernel::erlang(3.0)}) {
        History hist = History::constant({0, 0, 0});
        const Trajectory tr = integrate_dde(f, k, History::constant({0.5, 0.3, 0.2}), 0.005, 4.0, {}, &hist);
        for (std::size_t i = 200; i < tr.size(); i += 100) {
            const StateVec chain{tr.monitor("xt1")[i], tr.monitor("xt2")[i], tr.monitor("xt3")[i]};
            lct = std::max(lct, sup_norm(chain - delayed_state(hist, k, tr.time(i))));
        }
    }
    r.bound("delay.chain-vs-quadrature", lct, 1e-6, "linear chain variables equal the delayed state by quadrature",
            "exponential alpha=2 and Erlang alpha=3 along a common trajectory");

    const StateVec x0{0.5, 0.3, 0.2};
    const Trajectory ref = integrate_rk4(builtin_field("classical"), x0, 0.005, 2000);
    auto gap = [&](const Kernel& k) { return sup_gap(integrate_dde(f, k, History::constant(x0), 0.005, 10.0), ref); };
    r.bound("delay.concentrated-exponential", gap(Kernel::exponential(50)), 5e-2,
            "kernel concentrated at 0 approaches the classical flow", "exponential alpha=50, T=10");
    const double g1 = gap(Kernel::uniform(0, 0.2)), g2 = gap(Kernel::uniform(0, 0.1)), g3 = gap(Kernel::uniform(0, 0.05));
    r.verdict("delay.uniform-convergence-order", g1 > g2 && g2 > g3, std::log2(g2 / g3), 0.0,
              "uniform kernel on [0, tau] approaches the classical flow as tau -> 0",
              "measured = observed order; gaps " + sci(g1) + ", " + sci(g2) + ", " + sci(g3));
    const double e1 = gap(Kernel::erlang(20)), e2 = gap(Kernel::erlang(40));
    r.verdict("delay.erlang-convergence-order", e2 < e1, std::log2(e1 / e2), 0.0,
              "Erlang kernel approaches the classical flow as alpha grows",
              "measured = observed order; gaps " + sci(e1) + ", " + sci(e2));
}

}  // namespace rabinovich::cli::detail
