#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rabinovich/delay.hpp"
#include "rabinovich/fractional.hpp"
#include "rabinovich/metriplectic.hpp"

namespace rabinovich {

using Complex = std::complex<double>;

/// Linear part D^α u = A u + B ũ at an equilibrium.
struct LinearizationPair {
    Mat3 a;
    Mat3 b;  // zero for systems without delay
};

enum class Classification { AsymptoticallyStable, SpectrallyStableMarginal, Unstable, Inconclusive };

const char* to_string(Classification c);

struct StabilityVerdict {
    Classification classification = Classification::Inconclusive;
    std::vector<Complex> eigenvalues;
    bool zero_eigenvalue = false;
    std::string evidence;
};

inline constexpr double kSpectralTol = 1e-9;

/// Roots of the monic cubic λ³ + c2 λ² + c1 λ + c0 (Cardano for one real
/// root, Newton polish, stable quadratic for the rest).
std::vector<Complex> cubic_roots(const Cubic& c);

/// Eigenvalues of J from its characteristic polynomial.
std::vector<Complex> eigenvalues(const Mat3& j);

/// Unstable if some Re λ > tol, asymptotically stable if all Re λ < −tol,
/// marginal otherwise.
StabilityVerdict classify_spectral(const Mat3& j, double tol = kSpectralTol);

/// Sector test |arg λ| > απ/2 on the nonzero eigenvalues, measured by the
/// signed distance |λ| sin(|arg λ| − απ/2) against tol. Zero eigenvalues set
/// the flag and cap the verdict at marginal.
StabilityVerdict matignon_check(const Mat3& a, const FracOrder& alpha, double tol = kSpectralTol);

/// Δ(λ) = det(λ^α I − A − k̂(λ) B), principal branch of λ^α.
Complex char_fn(const LinearizationPair& l, const Kernel& k, const FracOrder& alpha, Complex lambda);

struct Region {
    double re_min, re_max, im_min, im_max;
};

struct RootScan {
    std::vector<Complex> roots;
    bool has_imaginary_axis_root = false;  // some |Re λ| < 1e-6
    int seeds = 0;
    int failed_seeds = 0;                   // Newton did not converge
    std::vector<std::string> notes;
};

/// Grid scan of |Δ| for local minima, each refined by damped Newton.
/// Reports roots with |Δ| < 1e-10.
RootScan scan_roots(const LinearizationPair& l, const Kernel& k, const FracOrder& alpha,
                    const Region& region, int grid);

/// Characteristic function printed for the fractional classical system at
/// each equilibrium family.
Complex printed_fractional_char_fn(const EquilibriumFamily& fam, const FracOrder& alpha,
                                   Complex lambda);

}  // namespace rabinovich
