#include "rabinovich/fractional.hpp"

#include <cmath>

namespace rabinovich {

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha > 1.0)
        throw DomainError("fractional order must satisfy 0 < alpha <= 1");
}

double rl_integral(const std::function<double(double)>& f, double beta, double t, long n) {
    if (!std::isfinite(beta) || !(beta > 0.0)) throw DomainError("rl_integral: beta must be > 0");
    if (!std::isfinite(t) || !(t > 0.0)) throw DomainError("rl_integral: t must be > 0");
    if (n < 1) throw DomainError("rl_integral: need at least one cell");
    const double h = t / static_cast<double>(n);
    const double hb = std::pow(h, beta) / beta;
    double sum = 0.0;
    for (long k = 0; k < n; ++k) {
        const double d = static_cast<double>(n - k);
        sum += hb * (std::pow(d, beta) - std::pow(d - 1.0, beta)) * f(static_cast<double>(k) * h);
    }
    return sum / std::tgamma(beta);
}

namespace {

// Weights depend on the lag d = j − i only, except a(0, j+1).
struct WeightTables {
    std::vector<double> b;       // b[d]: predictor weight for lag d = j − i
    std::vector<double> a;       // a[e]: interior corrector weight, e = j − i + 1 >= 1
    std::vector<double> a_first; // a(0, j+1)
    double a_last;               // a(j+1, j+1)
};

double b_weight(double alpha, double ha, double d) {
    return ha * (std::pow(d + 1.0, alpha) - std::pow(d, alpha)) / alpha;
}

double a_interior(double alpha, double ha, double e) {
    return ha * (std::pow(e + 1.0, alpha + 1.0) + std::pow(e - 1.0, alpha + 1.0) - 2.0 * std::pow(e, alpha + 1.0)) /
           (alpha * (alpha + 1.0));
}

double a_first(double alpha, double ha, double j) {
    return ha * (std::pow(j, alpha + 1.0) - (j - alpha) * std::pow(j + 1.0, alpha)) / (alpha * (alpha + 1.0));
}

WeightTables make_tables(double alpha, double dt, long n) {
    const double ha = std::pow(dt, alpha);
    WeightTables w;
    w.b.resize(static_cast<std::size_t>(n));
    w.a.resize(static_cast<std::size_t>(n) + 1);
    w.a_first.resize(static_cast<std::size_t>(n));
    for (long d = 0; d < n; ++d) {
        w.b[static_cast<std::size_t>(d)] = b_weight(alpha, ha, static_cast<double>(d));
        w.a_first[static_cast<std::size_t>(d)] = a_first(alpha, ha, static_cast<double>(d));
    }
    for (long e = 1; e <= n; ++e) w.a[static_cast<std::size_t>(e)] = a_interior(alpha, ha, static_cast<double>(e));
    w.a_last = ha / (alpha * (alpha + 1.0));
    return w;
}

// The PECE loop shared by the plain and delayed variants; `rhs(k, x)` is F at
// node k (or at the predictor when k = j + 1 is not yet stored).
template <class Rhs>
FracTrajectory run_abm(const StateVec& x0, const FracOrder& alpha, double dt, long n, Rhs&& rhs,
                       const std::vector<Monitor>& monitors) {
    if (!std::isfinite(dt) || !(dt > 0.0)) throw DomainError("integrate_abm: dt must be positive");
    if (n < 1) throw DomainError("integrate_abm: need at least one step");
    require_finite(x0, "integrate_abm initial state");

    const WeightTables w = make_tables(alpha.value(), dt, n);
    const double inv_gamma = 1.0 / std::tgamma(alpha.value());

    std::vector<StateVec> xs{x0};
    std::vector<StateVec> fs;
    std::vector<StateVec> fps;
    xs.reserve(static_cast<std::size_t>(n) + 1);
    fs.reserve(static_cast<std::size_t>(n) + 1);
    fps.reserve(static_cast<std::size_t>(n));

    auto eval = [&](long k, const StateVec& x) {
        const StateVec f = rhs(k, x, xs);
        if (!f.finite()) throw NumericalError("integrate_abm: non-finite field value", k);
        return f;
    };
    fs.push_back(eval(0, x0));

    for (long j = 0; j < n; ++j) {
        StateVec pred, corr;
        const auto uj = static_cast<std::size_t>(j);
        for (std::size_t k = 0; k <= uj; ++k) pred += w.b[uj - k] * fs[k];
        corr += w.a_first[uj] * fs[0];
        for (std::size_t k = 1; k <= uj; ++k) corr += w.a[uj - k + 1] * fs[k];

        const StateVec xp = x0 + inv_gamma * pred;
        if (!xp.finite()) throw NumericalError("integrate_abm: predictor became non-finite", j + 1);
        const StateVec fp = eval(j + 1, xp);
        corr += w.a_last * fp;
        const StateVec x = x0 + inv_gamma * corr;
        if (!x.finite()) throw NumericalError("integrate_abm: state became non-finite", j + 1);
        xs.push_back(x);
        fps.push_back(fp);
        fs.push_back(eval(j + 1, x));
    }

    Trajectory traj(0.0, dt, xs);
    for (const auto& m : monitors) {
        std::vector<double> values;
        values.reserve(xs.size());
        for (const auto& s : xs) values.push_back(m.fn(s));
        traj.add_monitor(m.name, std::move(values));
    }
    return FracTrajectory{std::move(traj), std::move(fs), std::move(fps), alpha, dt};
}

}  // namespace

AbmWeightRow abm_weights(const FracOrder& alpha, double dt, long j) {
    if (!std::isfinite(dt) || !(dt > 0.0)) throw DomainError("abm_weights: dt must be positive");
    if (j < 0) throw DomainError("abm_weights: j must be >= 0");
    const double a = alpha.value();
    const double ha = std::pow(dt, a);
    AbmWeightRow row;
    row.b.resize(static_cast<std::size_t>(j) + 1);
    row.a.resize(static_cast<std::size_t>(j) + 2);
    for (long i = 0; i <= j; ++i) row.b[static_cast<std::size_t>(i)] = b_weight(a, ha, static_cast<double>(j - i));
    row.a[0] = a_first(a, ha, static_cast<double>(j));
    for (long i = 1; i <= j; ++i)
        row.a[static_cast<std::size_t>(i)] = a_interior(a, ha, static_cast<double>(j - i + 1));
    row.a[static_cast<std::size_t>(j) + 1] = ha / (a * (a + 1.0));
    return row;
}

FracTrajectory integrate_abm(const VectorField& field, const StateVec& x0, const FracOrder& alpha, double dt,
                             long n, const std::vector<Monitor>& monitors) {
    return run_abm(
        x0, alpha, dt, n, [&](long, const StateVec& x, const std::vector<StateVec>&) { return field(x); },
        monitors);
}

FracTrajectory integrate_abm_delay(const DelayField& field, const History& phi, double tau, const StateVec& x0,
                                   const FracOrder& alpha, double dt, long n, const std::vector<Monitor>& monitors) {
    if (!std::isfinite(tau) || !(tau > 0.0)) throw DomainError("integrate_abm_delay: tau must be > 0");
    if (dt > tau / 2.0 * (1.0 + 1e-12)) throw DomainError("integrate_abm_delay: dt must be <= tau/2");
    if (phi.earliest() > -tau)
        throw DomainError("insufficient history: initial function must cover t=" + std::to_string(-tau));

    History grid = phi;
    grid.set_interpolation(History::Interpolation::Cubic);
    std::vector<StateVec> xt_monitor;

    auto rhs = [&](long k, const StateVec& x, const std::vector<StateVec>& xs) {
        // Nodes computed so far enter the grid once; x̃ at node k needs
        // t_k − τ <= t_{k−2}, which is already stored.
        while (static_cast<long>(grid.buffer().size()) < static_cast<long>(xs.size()))
            grid.append(static_cast<double>(grid.buffer().size()) * dt, xs[grid.buffer().size()]);
        const StateVec xt = grid.at(static_cast<double>(k) * dt - tau);
        return field(x, xt);
    };
    FracTrajectory ft = run_abm(x0, alpha, dt, n, rhs, monitors);

    std::vector<std::vector<double>> cols(3);
    for (std::size_t i = 0; i < ft.traj.size(); ++i) {
        const StateVec xt = grid.at(static_cast<double>(i) * dt - tau);
        for (std::size_t c = 0; c < 3; ++c) cols[c].push_back(xt[c]);
    }
    for (std::size_t c = 0; c < 3; ++c) ft.traj.add_monitor("xt" + std::to_string(c + 1), std::move(cols[c]));
    return ft;
}

StateVec abm_recompute_predictor(const FracTrajectory& ft, long j) {
    if (j < 0 || static_cast<std::size_t>(j) >= ft.predictor_field.size())
        throw DomainError("abm_recompute_predictor: step out of range");
    const AbmWeightRow row = abm_weights(ft.alpha, ft.dt, j);
    StateVec sum;
    for (std::size_t k = 0; k < row.b.size(); ++k) sum += row.b[k] * ft.field_history[k];
    return ft.traj.state(0) + (1.0 / std::tgamma(ft.alpha.value())) * sum;
}

StateVec abm_recompute_step(const FracTrajectory& ft, long j) {
    if (j < 0 || static_cast<std::size_t>(j) >= ft.predictor_field.size())
        throw DomainError("abm_recompute_step: step out of range");
    const AbmWeightRow row = abm_weights(ft.alpha, ft.dt, j);
    StateVec sum;
    for (std::size_t k = 0; k + 1 < row.a.size(); ++k) sum += row.a[k] * ft.field_history[k];
    sum += row.a.back() * ft.predictor_field[static_cast<std::size_t>(j)];
    return ft.traj.state(0) + (1.0 / std::tgamma(ft.alpha.value())) * sum;
}

StateVec fractional_field_500(const StateVec& x, const StateVec& xt, const BlendWeights& w, RevisedMode mode) {
    return revised_delay_field(x, xt, w, mode);
}

}  // namespace rabinovich
