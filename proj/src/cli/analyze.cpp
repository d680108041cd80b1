#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "rabinovich/cli/commands.hpp"
#include "rabinovich/stability.hpp"

namespace rabinovich::cli {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const StateVec& v) { return Json::array({v[0], v[1], v[2]}); }

Json to_json(const Mat3& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
    return rows;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const std::vector<Complex>& zs) {
    Json a = Json::array();
    for (const auto& z : zs) a.push_back(to_json(z));
    return a;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x == 0 ? 0.0 : x);
    return buf;
}

std::string fmt(Complex z) {
    if (z.imag() == 0) return fmt(z.real());
    return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

std::string fmt(const std::vector<Complex>& zs) {
    std::string s = "[";
    for (std::size_t i = 0; i < zs.size(); ++i) s += (i ? ", " : "") + fmt(zs[i]);
    return s + "]";
}

std::string fmt(const StateVec& v) { return "(" + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + ")"; }

std::string fmt(const Mat3& m) {
    std::string s = "[";
    for (std::size_t i = 0; i < 3; ++i) s += (i ? "; " : "") + fmt(m(i, 0)) + " " + fmt(m(i, 1)) + " " + fmt(m(i, 2));
    return s + "]";
}

struct Linearization {
    EquilibriumFamily fam;
    StateVec point;
    StateVec residual;
    bool stationary = false;
    Mat3 a, b;
};

DelayField delay_field_for(const ScenarioConfig& cfg) {
    const BlendWeights w = *cfg.weights;
    const RevisedMode mode = cfg.mode;
    if (cfg.system == "delay")
        return [w](const StateVec& x, const StateVec& xt) { return delay_hamiltonian_field(x, xt, w); };
    if (cfg.system == "delay-revised")
        return [w, mode](const StateVec& x, const StateVec& xt) { return revised_delay_field(x, xt, w, mode); };
    return [w, mode](const StateVec& x, const StateVec& xt) { return fractional_field_500(x, xt, w, mode); };
}

Linearization linearize(const ScenarioConfig& cfg, const EquilibriumFamily& fam) {
    Linearization l{fam, equilibrium_point(fam), {}, false, {}, {}};
    if (is_delay_system(cfg.system)) {
        const DelayField f = delay_field_for(cfg);
        l.residual = f(l.point, l.point);
        l.stationary = sup_norm(l.residual) == 0.0;
        if (l.stationary) std::tie(l.a, l.b) = linearize_delay_field(f, l.point);
        return l;
    }
    const VectorField f = builtin_field(cfg.system == "fractional" ? "classical" : cfg.system);
    l.residual = f(l.point);
    l.stationary = sup_norm(l.residual) == 0.0;
    if (l.stationary)
        l.a = jacobian(f, l.point, f.analytic_jacobian ? JacobianMode::Analytic : JacobianMode::FiniteDifference);
    return l;
}

Kernel kernel_for(const ScenarioConfig& cfg) {
    if (cfg.kernel) return *cfg.kernel;
    if (cfg.tau) return Kernel::dirac(*cfg.tau);
    return Kernel::dirac(1.0);  // B = 0, so the kernel does not enter
}

FracOrder order_for(const ScenarioConfig& cfg) { return FracOrder(cfg.alpha.value_or(1.0)); }

Json verdict_json(const StabilityVerdict& v) {
    Json j;
    j["classification"] = to_string(v.classification);
    j["eigenvalues"] = to_json(v.eigenvalues);
    j["zero_eigenvalue"] = v.zero_eigenvalue;
    j["evidence"] = v.evidence;
    return j;
}

std::string verdict_text(const StabilityVerdict& v) {
    return std::string(to_string(v.classification)) + (v.zero_eigenvalue ? " (zero eigenvalue)" : "") +
           ", eigenvalues " + fmt(v.eigenvalues);
}

/// Verdict used for the equilibria/matignon targets. Delay systems are
/// judged on A + B, i.e. with the lag removed.
StabilityVerdict verdict_for(const ScenarioConfig& cfg, const Linearization& l) {
    const Mat3 m = is_delay_system(cfg.system) ? l.a + l.b : l.a;
    if (is_fractional_system(cfg.system)) return matignon_check(m, order_for(cfg));
    return classify_spectral(m);
}

}  // namespace

AnalyzeReport run_analyze(const ScenarioConfig& cfg, const std::string& target) {
    require_for_analyze(cfg, target);
    const double m = *cfg.m;
    std::ostringstream text;
    Json doc;
    doc["system"] = cfg.system;
    doc["target"] = target;
    doc["m"] = m;
    if (cfg.alpha) doc["alpha"] = *cfg.alpha;
    text << "system " << cfg.system << ", target " << target << ", m = " << fmt(m);
    if (cfg.alpha) text << ", alpha = " << fmt(*cfg.alpha);
    text << "\n";
    if (is_delay_system(cfg.system))
        text << "delay systems: A = dX/dx, B = dX/dx~ at x = x~ = equilibrium; verdicts use A + B (zero lag)\n";

    Json fams = Json::array();
    for (auto kind : {EquilibriumKind::E1, EquilibriumKind::E2, EquilibriumKind::E3}) {
        const Linearization l = linearize(cfg, {kind, m});
        Json f;
        f["family"] = to_string(kind);
        f["point"] = to_json(l.point);
        f["stationary"] = l.stationary;
        text << to_string(kind) << " " << fmt(l.point) << ": ";
        if (!l.stationary) {
            f["residual"] = to_json(l.residual);
            text << "not stationary, field residual " << fmt(l.residual) << "\n";
            fams.push_back(f);
            continue;
        }
        f["A"] = to_json(l.a);
        if (is_delay_system(cfg.system)) f["B"] = to_json(l.b);
        text << "A = " << fmt(l.a);
        if (is_delay_system(cfg.system)) text << ", B = " << fmt(l.b);
        text << "\n";

        if (target == "equilibria" || target == "matignon") {
            const StabilityVerdict v = verdict_for(cfg, l);
            f["verdict"] = verdict_json(v);
            text << "  " << (is_fractional_system(cfg.system) ? "sector test: " : "spectral: ") << verdict_text(v)
                 << "\n";
        } else if (target == "charpoly") {
            if (!is_delay_system(cfg.system)) {
                const Cubic c = characteristic_polynomial(l.a);
                f["charpoly"] = Json::array({c[0], c[1], c[2], c[3]});
                const char* var = is_fractional_system(cfg.system) ? "mu" : "lambda";
                text << "  computed: " << var << "^3 + (" << fmt(c[2]) << ") " << var << "^2 + (" << fmt(c[1])
                     << ") " << var << " + (" << fmt(c[0]) << ")";
                if (is_fractional_system(cfg.system)) text << "  with mu = lambda^alpha";
                text << "\n";
                Cubic printed;
                if (printed_char_poly(cfg.system, l.fam, printed)) {
                    const bool same = printed == c;
                    f["printed_charpoly"] = Json::array({printed[0], printed[1], printed[2], printed[3]});
                    f["printed_matches"] = same;
                    text << "  printed:  coefficients (" << fmt(printed[0]) << ", " << fmt(printed[1]) << ", "
                         << fmt(printed[2]) << ", 1) " << (same ? "match" : "DIFFER") << "\n";
                }
            }
            if (is_fractional_system(cfg.system) || is_delay_system(cfg.system)) {
                Json samples = Json::array();
                for (Complex lam : {Complex(0.7, 0.4), Complex(1.2, 0.9), Complex(0.3, 2.0)}) {
                    Json s;
                    s["lambda"] = to_json(lam);
                    const Complex d = char_fn({l.a, l.b}, kernel_for(cfg), order_for(cfg), lam);
                    s["delta"] = to_json(d);
                    text << "  Delta(" << fmt(lam) << ") = " << fmt(d);
                    if (cfg.system == "fractional") {
                        const Complex p = printed_fractional_char_fn(l.fam, order_for(cfg), lam);
                        s["printed"] = to_json(p);
                        s["abs_difference"] = std::abs(p - d);
                        text << ", printed form " << fmt(p);
                    }
                    text << "\n";
                    samples.push_back(s);
                }
                f["char_fn_samples"] = samples;
            }
        } else {
            const RootScan rs = scan_roots({l.a, l.b}, kernel_for(cfg), order_for(cfg), *cfg.region, *cfg.grid);
            Json r;
            r["roots"] = to_json(rs.roots);
            r["has_imaginary_axis_root"] = rs.has_imaginary_axis_root;
            r["seeds"] = rs.seeds;
            r["failed_seeds"] = rs.failed_seeds;
            r["notes"] = rs.notes;
            f["roots"] = r;
            text << "  roots " << fmt(rs.roots) << (rs.has_imaginary_axis_root ? " (root on the imaginary axis)" : "")
                 << ", seeds " << rs.seeds << ", failed " << rs.failed_seeds << "\n";
        }
        fams.push_back(f);
    }
    doc["families"] = fams;
    return {text.str(), doc.dump(2) + "\n"};
}

}  // namespace rabinovich::cli
