#pragma once

// Caputo fractional systems: Riemann-Liouville integral, Adams-Bashforth-
// Moulton weights and the predictor-corrector integrator.

#include <functional>
#include <optional>
#include <vector>

#include "rabinovich/core_dynamics.hpp"
#include "rabinovich/delay.hpp"

namespace rabinovich {

/// Order α of the Caputo derivative, 0 < α <= 1.
class FracOrder {
public:
    explicit FracOrder(double alpha);
    double value() const { return alpha_; }

private:
    double alpha_;
};

/// (1/Γ(β)) ∫₀ᵗ (t−s)^{β−1} f(s) ds by product-rectangle quadrature on n
/// uniform cells (left endpoint values), i.e. the predictor weights.
double rl_integral(const std::function<double(double)>& f, double beta, double t, long n = 1000);

/// One row of ABM weights for the step j → j+1.
struct AbmWeightRow {
    std::vector<double> b;  // b(i, j+1), i = 0..j
    std::vector<double> a;  // a(i, j+1), i = 0..j+1
};

/// b(i,j+1) = h^α((j−i+1)^α − (j−i)^α)/α
/// a(0,j+1) = h^α(j^{α+1} − (j−α)(j+1)^α)/(α(α+1))
/// a(i,j+1) = h^α((j−i+2)^{α+1} + (j−i)^{α+1} − 2(j−i+1)^{α+1})/(α(α+1)), 1 <= i <= j
/// a(j+1,j+1) = h^α/(α(α+1))
AbmWeightRow abm_weights(const FracOrder& alpha, double dt, long j);

/// Trajectory of a fractional integration. The full state history is the
/// trajectory itself; `field_history[k]` is F at node k and
/// `predictor_field[j]` is F at the predictor for node j+1. Memory length
/// equals the step count.
struct FracTrajectory {
    Trajectory traj;
    std::vector<StateVec> field_history;
    std::vector<StateVec> predictor_field;
    FracOrder alpha;
    double dt;
};

/// PECE Adams-Bashforth-Moulton for D^α x = F(x), n steps of size dt.
FracTrajectory integrate_abm(const VectorField& field, const StateVec& x0, const FracOrder& alpha,
                             double dt, long n, const std::vector<Monitor>& monitors = {});

/// Delay variant D^α x = F(x, x(t−τ)) with initial function φ on [−τ, 0].
/// Requires dt <= τ/2. Delayed values are cubic interpolants of the
/// computed grid (φ before t = 0).
FracTrajectory integrate_abm_delay(const DelayField& field, const History& phi, double tau,
                                   const StateVec& x0, const FracOrder& alpha, double dt, long n,
                                   const std::vector<Monitor>& monitors = {});

/// x(j+1) recomputed from scratch with abm_weights() rows and the stored
/// field values. Cross-checks the integrator's memory sums.
StateVec abm_recompute_step(const FracTrajectory& ft, long j);

/// Predictor x_p(j+1) recomputed from scratch.
StateVec abm_recompute_predictor(const FracTrajectory& ft, long j);

/// Right-hand side of the fractional revised delay system; same family as
/// revised_delay_field.
StateVec fractional_field_500(const StateVec& x, const StateVec& xt, const BlendWeights& w,
                              RevisedMode mode = RevisedMode::Constructed);

}  // namespace rabinovich
