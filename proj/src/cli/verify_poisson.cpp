#include <cmath>

#include "rabinovich/core_dynamics.hpp"
#include "rabinovich/poisson.hpp"
#include "verify_internal.hpp"

namespace rabinovich::cli::detail {

namespace {

QuadraticFn random_quadratic(std::mt19937_64& rng) {
    Mat6 q{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) q[i][j] = q[j][i] = uniform(rng, -1, 1);
    Coeff6 b{};
    for (std::size_t i = 0; i < 3; ++i) b[i] = uniform(rng, -1, 1);
    return QuadraticFn::from_matrix(q, b, uniform(rng, -1, 1));
}

PoissonPencil random_pencil(std::mt19937_64& rng) {
    double a = uniform(rng, -3, 3);
    if (std::abs(a) < 0.1) a = a < 0 ? -0.1 : 0.1;
    return {a, uniform(rng, -3, 3), uniform(rng, -3, 3)};
}

}  // namespace

void verify_poisson(Recorder& r, std::uint64_t seed) {
    auto rng = suite_rng(seed, "poisson");

    double worst = 0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, tri_hamiltonian_gap(uniform_point(rng, -5, 5)));
    r.bound("poisson.tri-hamiltonian", worst, 1e-12, "three Hamilton-Poisson realizations of the classical field",
            "max pairwise sup gap, 1000 points in [-5,5]^3");

    struct Structure {
        PoissonTensor p;
        QuadraticFn c;
    };
    std::vector<Structure> structures = {{tensor_p1(), casimir_c1()}, {tensor_p2(), casimir_c2()},
                                         {tensor_p3(), casimir_c3()}};
    for (int i = 0; i < 20; ++i) {
        const PoissonPencil pen = random_pencil(rng);
        structures.push_back({pencil_tensor(pen), pencil_casimir(pen)});
    }
    // Pencil residuals cancel products of size |P||grad c|; they are scaled by
    // that magnitude. The three fixed tensors are measured in absolute terms.
    double jac = 0, cas = 0, cas_pencil = 0;
    for (std::size_t k = 0; k < structures.size(); ++k) {
        const auto& s = structures[k];
        for (int i = 0; i < 100; ++i) {
            const StateVec x = uniform_point(rng, -5, 5);
            jac = std::max(jac, std::abs(jacobi_residual(s.p, QuadraticFn::coordinate(0), QuadraticFn::coordinate(1),
                                                         QuadraticFn::coordinate(2), x)));
            jac = std::max(jac, std::abs(jacobi_residual(s.p, random_quadratic(rng), random_quadratic(rng),
                                                         random_quadratic(rng), x)));
            const double res = sup_norm(casimir_residual(s.p, s.c, x));
            if (k < 3) {
                cas = std::max(cas, res);
            } else {
                const Mat3 pm = s.p.eval(x);
                const StateVec dc = s.c.grad_x(x);
                double scale = 0;
                for (std::size_t a = 0; a < 3; ++a) {
                    double row = 0;
                    for (std::size_t b = 0; b < 3; ++b) row += std::abs(pm(a, b) * dc[b]);
                    scale = std::max(scale, row);
                }
                cas_pencil = std::max(cas_pencil, scale > 0 ? res / scale : res);
            }
        }
    }
    r.bound("poisson.jacobi", jac, 1e-10, "P1, P2, P3 and the pencil are Poisson tensors",
            "3 tensors + 20 random pencils, 100 points each");
    r.bound("poisson.casimir", cas, 1e-13, "Casimirs of P1, P2, P3", "absolute, 100 points each in [-5,5]^3");
    r.bound("poisson.casimir-pencil", cas_pencil, 1e-13, "Casimir of the pencil",
            "|P grad c| / max_i sum_j |P_ij d_j c|, 20 random pencils, 100 points each");

    double anti = 0, leib = 0;
    for (int i = 0; i < 200; ++i) {
        const StateVec x = uniform_point(rng, -3, 3);
        const auto& s = structures[static_cast<std::size_t>(i) % structures.size()];
        const QuadraticFn f = random_quadratic(rng), g = random_quadratic(rng);
        anti = std::max(anti, std::abs(bracket(s.p, f, g, x) + bracket(s.p, g, f, x)));
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
                const double lhs = bracket(s.p, QuadraticFn::product(a, b), g, x);
                const double rhs = x[a] * bracket(s.p, QuadraticFn::coordinate(b), g, x) +
                                   x[b] * bracket(s.p, QuadraticFn::coordinate(a), g, x);
                leib = std::max(leib, std::abs(lhs - rhs));
            }
    }
    r.bound("poisson.antisymmetry", anti, 1e-12, "bracket antisymmetry");
    r.bound("poisson.leibniz", leib, 1e-11, "bracket Leibniz rule on products of coordinates");

    worst = 0;
    for (int i = 0; i < 200; ++i) {
        const PoissonPencil pen = random_pencil(rng);
        const StateVec x = uniform_point(rng, -5, 5);
        const StateVec f = hamiltonian_field(pencil_tensor(pen), pencil_hamiltonian(pen), x);
        worst = std::max(worst, sup_norm(f - rabinovich_field(x)) / (1 + dot(x, x)));
    }
    r.bound("poisson.pencil-hamiltonian", worst, 1e-12, "pencil with Hamiltonian (1/2alpha)(x1^2+x2^2) gives the classical field",
            "sup gap / (1 + |x|^2)");

    // Metric section pairing: the same h and c listed with every tensor.
    double gap = 0, cgap = 0;
    for (int i = 0; i < 100; ++i) {
        const StateVec x = uniform_point(rng, -5, 5);
        for (const auto& p : {tensor_p2(), tensor_p3()}) {
            gap = std::max(gap, sup_norm(hamiltonian_field(p, alt_hamiltonian(), x) - rabinovich_field(x)));
            cgap = std::max(cgap, sup_norm(casimir_residual(p, alt_casimir(), x)));
        }
    }
    r.discrepancy("poisson.metric-section-pairing", gap, 1e-9,
                  "metric section lists h = (x1^2+x2^2)/2, c = (x2^2+x3^2)/2 with P2 and P3",
                  "P grad h misses the classical field by up to " + sci(gap) + "; P grad c up to " + sci(cgap) +
                      "; the h2, h3, c2, c3 of the Poisson section are used instead");
}

}  // namespace rabinovich::cli::detail
