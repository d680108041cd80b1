#include "rabinovich/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace rabinovich {

const char* to_string(Classification c) {
    switch (c) {
        case Classification::AsymptoticallyStable: return "asymptotically-stable";
        case Classification::SpectrallyStableMarginal: return "spectrally-stable-marginal";
        case Classification::Unstable: return "unstable";
        case Classification::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

double eval_cubic(const Cubic& c, double x) { return ((x + c[2]) * x + c[1]) * x + c[0]; }
double eval_cubic_derivative(const Cubic& c, double x) { return (3.0 * x + 2.0 * c[2]) * x + c[1]; }

double polish(const Cubic& c, double x) {
    for (int i = 0; i < 8; ++i) {
        const double fx = eval_cubic(c, x);
        const double d = eval_cubic_derivative(c, x);
        if (fx == 0.0 || d == 0.0) break;
        const double next = x - fx / d;
        if (!(std::abs(eval_cubic(c, next)) < std::abs(fx))) break;
        x = next;
    }
    return x;
}

std::string format_roots(const std::vector<Complex>& roots) {
    std::string out = "eigenvalues:";
    char buf[96];
    for (const auto& r : roots) {
        std::snprintf(buf, sizeof buf, " %.6g%+.6gi", r.real(), r.imag());
        out += buf;
    }
    return out;
}

}  // namespace

std::vector<Complex> cubic_roots(const Cubic& c) {
    const double a2 = c[2], a1 = c[1], a0 = c[0];
    const double shift = a2 / 3.0;
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    double real_root;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        real_root = std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) - shift;
    } else {
        // Three real roots; deflate with the one of largest magnitude.
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        real_root = r * std::cos(phi) - shift;
        for (int k = 1; k < 3; ++k) {
            const double cand = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - shift;
            if (std::abs(cand) > std::abs(real_root)) real_root = cand;
        }
    }
    real_root = polish(c, real_root);

    // λ³ + a2λ² + a1λ + a0 = (λ − r)(λ² + bλ + e)
    const double b = a2 + real_root;
    const double e = a1 + real_root * b;
    const double d = b * b - 4.0 * e;
    std::vector<Complex> roots{real_root};
    if (d >= 0.0) {
        const double qq = -0.5 * (b + std::copysign(std::sqrt(d), b));
        if (qq == 0.0) {
            roots.emplace_back(0.0);
            roots.emplace_back(0.0);
        } else {
            roots.emplace_back(polish(c, qq));
            roots.emplace_back(polish(c, e / qq));
        }
    } else {
        const double im = 0.5 * std::sqrt(-d);
        roots.emplace_back(-0.5 * b, im);
        roots.emplace_back(-0.5 * b, -im);
    }
    return roots;
}

std::vector<Complex> eigenvalues(const Mat3& j) { return cubic_roots(characteristic_polynomial(j)); }

StabilityVerdict classify_spectral(const Mat3& j, double tol) {
    StabilityVerdict v;
    if (!j.finite()) {
        v.evidence = "non-finite Jacobian";
        return v;
    }
    v.eigenvalues = eigenvalues(j);
    bool any_positive = false, all_negative = true;
    for (const auto& l : v.eigenvalues) {
        if (std::abs(l) <= tol) v.zero_eigenvalue = true;
        if (l.real() > tol) any_positive = true;
        if (!(l.real() < -tol)) all_negative = false;
    }
    if (any_positive)
        v.classification = Classification::Unstable;
    else if (all_negative)
        v.classification = Classification::AsymptoticallyStable;
    else
        v.classification = Classification::SpectrallyStableMarginal;
    v.evidence = format_roots(v.eigenvalues) + "; rule: sign of Re(lambda) with tol " + std::to_string(tol);
    return v;
}

StabilityVerdict matignon_check(const Mat3& a, const FracOrder& alpha, double tol) {
    StabilityVerdict v;
    if (!a.finite()) {
        v.evidence = "non-finite matrix";
        return v;
    }
    v.eigenvalues = eigenvalues(a);
    const double sector = alpha.value() * std::numbers::pi / 2.0;
    bool violated = false, boundary = false;
    for (const auto& l : v.eigenvalues) {
        if (std::abs(l) <= tol) {
            v.zero_eigenvalue = true;
            continue;
        }
        const double dist = std::abs(l) * std::sin(std::abs(std::arg(l)) - sector);
        if (dist < -tol)
            violated = true;
        else if (dist <= tol)
            boundary = true;
    }
    if (violated)
        v.classification = Classification::Unstable;
    else if (boundary || v.zero_eigenvalue)
        v.classification = Classification::SpectrallyStableMarginal;
    else
        v.classification = Classification::AsymptoticallyStable;
    v.evidence = format_roots(v.eigenvalues) + "; sector |arg| > " + std::to_string(sector) +
                 (v.zero_eigenvalue ? "; zero eigenvalue present" : "");
    return v;
}

namespace {

using CMat = std::array<std::array<Complex, 3>, 3>;

Complex cdet(const CMat& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool on_branch_cut(Complex z) { return z.imag() == 0.0 && z.real() <= 0.0; }

}  // namespace

Complex char_fn(const LinearizationPair& l, const Kernel& k, const FracOrder& alpha, Complex lambda) {
    const double a = alpha.value();
    if (a != 1.0 && on_branch_cut(lambda))
        throw DomainError("char_fn: lambda lies on the branch cut of lambda^alpha (the non-positive real axis)");
    const Complex la = (a == 1.0) ? lambda : std::pow(lambda, a);
    const Complex kh = kernel_laplace(k, lambda);
    CMat m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m[i][j] = (i == j ? la : Complex{}) - l.a(i, j) - kh * l.b(i, j);
    return cdet(m);
}

RootScan scan_roots(const LinearizationPair& l, const Kernel& k, const FracOrder& alpha, const Region& region,
                    int grid) {
    if (grid < 3) throw DomainError("scan_roots: grid must be >= 3");
    if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min))
        throw DomainError("scan_roots: empty region");
    if (alpha.value() != 1.0 && region.re_min <= 0.0 && region.im_min <= 0.0 && region.im_max >= 0.0)
        throw DomainError("scan_roots: region intersects the branch cut on the non-positive real axis");

    auto delta = [&](Complex z) -> Complex {
        try {
            return char_fn(l, k, alpha, z);
        } catch (const DomainError&) {
            return {std::numeric_limits<double>::infinity(), 0.0};
        }
    };

    const double dre = (region.re_max - region.re_min) / (grid - 1);
    const double dim = (region.im_max - region.im_min) / (grid - 1);
    auto node = [&](int i, int j) { return Complex(region.re_min + i * dre, region.im_min + j * dim); };
    std::vector<double> mag(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
    auto at = [&](int i, int j) -> double& { return mag[static_cast<std::size_t>(i) * grid + j]; };
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) at(i, j) = std::abs(delta(node(i, j)));

    RootScan out;
    const double cell = std::max(dre, dim);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double v = at(i, j);
            if (!std::isfinite(v)) continue;
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (!di && !dj) continue;
                    const int a = i + di, b = j + dj;
                    if (a < 0 || b < 0 || a >= grid || b >= grid) continue;
                    if (at(a, b) < v) {
                        is_min = false;
                        break;
                    }
                }
            if (!is_min) continue;
            ++out.seeds;

            // Damped Newton with a central-difference derivative.
            Complex z = node(i, j);
            Complex f = delta(z);
            for (int it = 0; it < 200 && std::abs(f) > 0.0; ++it) {
                const double h = 1e-6 * std::max(1.0, std::abs(z));
                const Complex d = (delta(z + h) - delta(z - h)) / (2.0 * h);
                if (d == Complex{} || !std::isfinite(std::abs(d))) break;
                Complex step = f / d;
                Complex zn = z - step;
                Complex fn = delta(zn);
                int halvings = 0;
                while (!(std::abs(fn) < std::abs(f)) && halvings < 40) {
                    step *= 0.5;
                    zn = z - step;
                    fn = delta(zn);
                    ++halvings;
                }
                if (!(std::abs(fn) < std::abs(f))) break;
                z = zn;
                f = fn;
                if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
            }
            const double margin = 1e-9 + 1e-3 * cell;
            const bool inside = z.real() >= region.re_min - margin && z.real() <= region.re_max + margin &&
                                z.imag() >= region.im_min - margin && z.imag() <= region.im_max + margin;
            if (!(std::abs(f) < 1e-10) || !inside) {
                ++out.failed_seeds;
                char buf[160];
                std::snprintf(buf, sizeof buf, "seed %.6g%+.6gi: no root (|Delta| = %.3g%s)", node(i, j).real(),
                              node(i, j).imag(), std::abs(f), inside ? "" : ", left region");
                out.notes.emplace_back(buf);
                continue;
            }
            const bool dup = std::any_of(out.roots.begin(), out.roots.end(), [&](const Complex& r) {
                return std::abs(r - z) < 1e-5 * std::max(1.0, std::abs(z));
            });
            if (!dup) out.roots.push_back(z);
        }
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    out.has_imaginary_axis_root =
        std::any_of(out.roots.begin(), out.roots.end(), [](const Complex& r) { return std::abs(r.real()) < 1e-6; });
    return out;
}

Complex printed_fractional_char_fn(const EquilibriumFamily& fam, const FracOrder& alpha, Complex lambda) {
    const double a = alpha.value();
    if (a != 1.0 && on_branch_cut(lambda)) throw DomainError("printed_fractional_char_fn: lambda on the branch cut");
    const Complex la = (a == 1.0) ? lambda : std::pow(lambda, a);
    const double m = fam.m, m2 = m * m;
    switch (fam.kind) {
        case EquilibriumKind::E1: return la * (-la * la + m2 * (m + 1.0));
        case EquilibriumKind::E2: return la * (la * la + m2 * lambda * lambda - m2);
        case EquilibriumKind::E3: return la * (la * la + m2);
    }
    return {};
}

}  // namespace rabinovich
