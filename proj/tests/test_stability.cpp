#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rabinovich/stability.hpp"
#include "test_support.hpp"

using namespace rabinovich;
using rabinovich::testing::random_matrix;

namespace {

std::vector<Complex> eigen_oracle(const Mat3& m) {
    Eigen::Matrix3d e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e(i, j) = m(i, j);
    const auto ev = Eigen::EigenSolver<Eigen::Matrix3d>(e).eigenvalues();
    return {ev(0), ev(1), ev(2)};
}

// Greedy matching distance between two root multisets.
double multiset_gap(std::vector<Complex> a, std::vector<Complex> b) {
    double worst = 0;
    for (const Complex& z : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](Complex p, Complex q) { return std::abs(p - z) < std::abs(q - z); });
        worst = std::max(worst, std::abs(*it - z));
        b.erase(it);
    }
    return worst;
}

Mat3 diag(double a, double b, double c) {
    Mat3 m;
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

bool contains(const std::vector<Complex>& roots, Complex z, double tol = 1e-8) {
    return std::any_of(roots.begin(), roots.end(), [&](Complex r) { return std::abs(r - z) < tol; });
}

}  // namespace

TEST_CASE("cubic roots against a companion-matrix eigen-solver") {
    std::mt19937_64 rng(83);
    for (int i = 0; i < 300; ++i) {
        const Mat3 m = random_matrix(rng);
        const auto mine = eigenvalues(m);
        REQUIRE(mine.size() == 3);
        CHECK(multiset_gap(mine, eigen_oracle(m)) < 1e-7);
    }
    // Triple and double roots.
    CHECK(multiset_gap(cubic_roots({-1, 3, -3, 1}), {1.0, 1.0, 1.0}) < 1e-5);
    CHECK(multiset_gap(cubic_roots({0, 1, 0, 1}), {0.0, Complex(0, 1), Complex(0, -1)}) < 1e-14);
    CHECK(multiset_gap(cubic_roots({-2, 5, -4, 1}), {1.0, 1.0, 2.0}) < 1e-7);
}

TEST_CASE("spectral classification of the classical equilibria") {
    for (double m : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
        const auto e1 = classify_spectral(rabinovich_jacobian({m, 0, 0}));
        const auto e2 = classify_spectral(rabinovich_jacobian({0, m, 0}));
        const auto e3 = classify_spectral(rabinovich_jacobian({0, 0, m}));
        CHECK(e1.classification == Classification::SpectrallyStableMarginal);
        CHECK(e2.classification == Classification::Unstable);
        CHECK(e3.classification == Classification::SpectrallyStableMarginal);
        CHECK(e1.zero_eigenvalue);
        CHECK(multiset_gap(e1.eigenvalues, {0.0, Complex(0, m), Complex(0, -m)}) < 1e-12);
        CHECK(multiset_gap(e2.eigenvalues, {0.0, m, -m}) < 1e-12);
    }
    CHECK(classify_spectral(diag(-1, -2, -3)).classification == Classification::AsymptoticallyStable);
    CHECK(std::string(to_string(Classification::SpectrallyStableMarginal)) == "spectrally-stable-marginal");
}

TEST_CASE("Matignon sector test") {
    Mat3 rot;  // eigenvalues 0, ±i
    rot(0, 1) = 1;
    rot(1, 0) = -1;
    const auto v = matignon_check(rot, FracOrder(0.8));
    CHECK(v.zero_eigenvalue);
    CHECK(v.classification == Classification::SpectrallyStableMarginal);
    for (double al : {0.3, 0.7, 1.0}) CHECK(matignon_check(diag(1, -1, -1), FracOrder(al)).classification == Classification::Unstable);
    // Eigenvalues 1 ± 2i have |arg| ≈ 0.352π: inside the stable sector for α = 0.5, outside for α = 0.8.
    Mat3 spiral;
    spiral(0, 0) = spiral(1, 1) = 1;
    spiral(0, 1) = 2;
    spiral(1, 0) = -2;
    spiral(2, 2) = -1;
    CHECK(matignon_check(spiral, FracOrder(0.5)).classification == Classification::AsymptoticallyStable);
    CHECK(matignon_check(spiral, FracOrder(0.8)).classification == Classification::Unstable);

    std::mt19937_64 rng(89);
    for (int i = 0; i < 100; ++i) {
        const Mat3 m = random_matrix(rng);
        CHECK(matignon_check(m, FracOrder(1.0)).classification == classify_spectral(m).classification);
    }
}

TEST_CASE("characteristic function") {
    std::mt19937_64 rng(97);
    const Kernel d = Kernel::dirac(0.5);
    for (int i = 0; i < 50; ++i) {
        const Mat3 a = random_matrix(rng);
        for (const Complex& ev : eigen_oracle(a)) CHECK(std::abs(char_fn({a, Mat3{}}, d, FracOrder(1.0), ev)) < 1e-9);
    }
    const Complex lam(0.7, 1.3);
    for (double al : {0.4, 0.9}) {
        CHECK(std::abs(char_fn({Mat3{}, Mat3{}}, d, FracOrder(al), lam) - std::pow(lam, 3 * al)) < 1e-12);
        // Delay-free reduction: det(λ^α I − A) = Π(λ^α − μᵢ).
        const Mat3 a = random_matrix(rng);
        Complex prod = 1;
        for (const Complex& mu : eigen_oracle(a)) prod *= std::pow(lam, al) - mu;
        CHECK(std::abs(char_fn({a, Mat3{}}, d, FracOrder(al), lam) - prod) < 1e-9);
        // Vanishing lag: det(λ^α I − A − B).
        const Mat3 b = random_matrix(rng);
        Complex prod_ab = 1;
        for (const Complex& mu : eigen_oracle(a + b)) prod_ab *= std::pow(lam, al) - mu;
        CHECK(std::abs(char_fn({a, b}, Kernel::dirac(1e-13), FracOrder(al), lam) - prod_ab) < 1e-9);
        CHECK_THROWS_AS(char_fn({a, b}, d, FracOrder(al), Complex(-1.0, 0.0)), DomainError);
        CHECK_THROWS_AS(char_fn({a, b}, d, FracOrder(al), Complex(0.0, 0.0)), DomainError);
    }
    // α = 1 has no cut.
    CHECK(std::isfinite(std::abs(char_fn({Mat3{}, Mat3{}}, d, FracOrder(1.0), Complex(-1.0, 0.0)))));
}

TEST_CASE("root scanning") {
    const Kernel d = Kernel::dirac(1.0);
    const RootScan s1 = scan_roots({diag(-1, -1, -1), Mat3{}}, d, FracOrder(1.0), {-2, 2, -2, 2}, 40);
    CHECK(contains(s1.roots, -1.0, 1e-4));

    Mat3 rot;
    rot(0, 1) = 1;
    rot(1, 0) = -1;
    rot(2, 2) = -0.5;
    const RootScan s2 = scan_roots({rot, Mat3{}}, d, FracOrder(1.0), {-2, 2, -2, 2}, 40);
    CHECK(contains(s2.roots, Complex(0, 1)));
    CHECK(contains(s2.roots, Complex(0, -1)));
    CHECK(s2.has_imaginary_axis_root);

    // Scalar Dirac factor λ − b e^{−λτ} with real root checked by bisection.
    const double b = 1.0, tau = 1.0;
    double lo = 0, hi = 2;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid - b * std::exp(-mid * tau) > 0 ? hi : lo) = mid;
    }
    Mat3 bm;
    bm(0, 0) = b;
    const LinearizationPair lp{diag(0, -2, -3), bm};
    const RootScan s3 = scan_roots(lp, d, FracOrder(1.0), {0.05, 3, -1, 1}, 30);
    REQUIRE(s3.roots.size() == 1);
    CHECK(std::abs(s3.roots[0] - lo) < 1e-9);

    const std::pair<const RootScan*, LinearizationPair> scans[] = {
        {&s1, {diag(-1, -1, -1), {}}}, {&s2, {rot, {}}}, {&s3, lp}};
    for (const auto& [s, l] : scans)
        for (const Complex& r : s->roots) CHECK(std::abs(char_fn(l, d, FracOrder(1.0), r)) < 1e-10);

    // A finer grid loses nothing.
    const RootScan fine = scan_roots({rot, Mat3{}}, d, FracOrder(1.0), {-2, 2, -2, 2}, 80);
    for (const Complex& r : s2.roots) CHECK(contains(fine.roots, r, 1e-6));

    // Fractional order: roots of λ^α = ±i lie at λ = e^{±iπ/(2α)}.
    const RootScan s4 = scan_roots({rot, Mat3{}}, d, FracOrder(0.8), {-1.5, 1.5, 0.05, 1.5}, 60);
    const Complex expect = std::polar(1.0, M_PI / 1.6);
    CHECK(contains(s4.roots, expect, 1e-6));
    CHECK_THROWS_AS(scan_roots({rot, Mat3{}}, d, FracOrder(0.8), {-1, 1, -1, 1}, 20), DomainError);
}
