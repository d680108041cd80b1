#include <algorithm>
#include <cmath>

#include "rabinovich/stability.hpp"
#include "verify_internal.hpp"

namespace rabinovich::cli::detail {

namespace {

Mat3 random_matrix(std::mt19937_64& rng) {
    Mat3 m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = uniform(rng, -2, 2);
    return m;
}

bool contains(const std::vector<Complex>& roots, Complex z, double tol) {
    return std::any_of(roots.begin(), roots.end(), [&](Complex r) { return std::abs(r - z) < tol; });
}

}  // namespace

void verify_stability(Recorder& r, std::uint64_t seed) {
    auto rng = suite_rng(seed, "stability");

    int mismatches = 0;
    for (double m : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
        mismatches += classify_spectral(rabinovich_jacobian({m, 0, 0})).classification != Classification::SpectrallyStableMarginal;
        mismatches += classify_spectral(rabinovich_jacobian({0, m, 0})).classification != Classification::Unstable;
        mismatches += classify_spectral(rabinovich_jacobian({0, 0, m})).classification != Classification::SpectrallyStableMarginal;
    }
    r.bound("stability.classical-table", mismatches, 0, "spectral stability of the three equilibrium families",
            "marginal, unstable, marginal for m in {+-0.5, +-1, +-2}");

    double inv = 0;
    int matignon_mismatch = 0;
    double at_eig = 0;
    const Kernel d = Kernel::dirac(0.5);
    for (int i = 0; i < 100; ++i) {
        const Mat3 a = random_matrix(rng);
        const auto ev = eigenvalues(a);
        Complex sum = 0, prod = 1;
        for (const Complex& z : ev) {
            sum += z;
            prod *= z;
            at_eig = std::max(at_eig, std::abs(char_fn({a, Mat3{}}, d, FracOrder(1.0), z)));
        }
        inv = std::max({inv, std::abs(sum - a.trace()), std::abs(prod - a.det())});
        matignon_mismatch += matignon_check(a, FracOrder(1.0)).classification != classify_spectral(a).classification;
    }
    r.bound("stability.eigen-invariants", inv, 1e-9, "eigenvalues reproduce trace and determinant",
            "100 random matrices");
    r.bound("stability.matignon-alpha1", matignon_mismatch, 0, "at alpha = 1 the sector test is the sign of Re lambda",
            "100 random matrices");
    r.bound("stability.char-fn-at-eigenvalues", at_eig, 1e-9, "Delta vanishes at the eigenvalues when B = 0");

    const auto v = matignon_check(rabinovich_jacobian({0, 0, 1.0}), FracOrder(0.8));
    r.verdict("stability.matignon-e3", v.classification == Classification::SpectrallyStableMarginal && v.zero_eigenvalue,
              v.zero_eigenvalue ? 1.0 : 0.0, 1.0, "sector test at (0,0,1), alpha = 0.8",
              std::string("verdict ") + to_string(v.classification) + ", zero eigenvalue flagged");

    Mat3 rot;
    rot(0, 1) = 1;
    rot(1, 0) = -1;
    rot(2, 2) = -0.5;
    const RootScan s = scan_roots({rot, Mat3{}}, d, FracOrder(1.0), {-2, 2, -2, 2}, 40);
    const RootScan fine = scan_roots({rot, Mat3{}}, d, FracOrder(1.0), {-2, 2, -2, 2}, 80);
    const bool found = contains(s.roots, {0, 1}, 1e-8) && contains(s.roots, {0, -1}, 1e-8) && contains(s.roots, -0.5, 1e-8);
    int lost = 0;
    for (const Complex& z : s.roots) lost += !contains(fine.roots, z, 1e-6);
    r.verdict("stability.scan-eigenvalues", found && s.has_imaginary_axis_root, static_cast<double>(s.roots.size()), 3.0,
              "root scan recovers +-i and -0.5 and flags the imaginary-axis pair");
    r.bound("stability.scan-refinement", lost, 0, "a 2x finer grid loses no roots");

    double lo = 0, hi = 2;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid - std::exp(-mid) > 0 ? hi : lo) = mid;
    }
    Mat3 a, b;
    a(1, 1) = -2;
    a(2, 2) = -3;
    b(0, 0) = 1;
    const RootScan sc = scan_roots({a, b}, Kernel::dirac(1.0), FracOrder(1.0), {0.05, 3, -1, 1}, 30);
    const double err = sc.roots.size() == 1 ? std::abs(sc.roots[0] - lo) : 1.0;
    r.bound("stability.scan-dirac-scalar", err, 1e-9, "root of lambda - exp(-lambda) against bisection");
}

}  // namespace rabinovich::cli::detail
