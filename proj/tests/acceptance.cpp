// Acceptance battery: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "oracles.hpp"
#include "stablehcm/classify.hpp"
#include "stablehcm/envelopes.hpp"
#include "stablehcm/hcm.hpp"
#include "stablehcm/saddle.hpp"

using namespace stablehcm;
using oracle::cplx;
using oracle::rel_err;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string f(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, i / double(n - 1));
    return v;
}

// 1. alpha = 1/2 closed forms.
Outcome closed_form_golden() {
    constexpr double tol = 1e-8;
    const auto p = StableParams::one_sided(0.5);
    const auto th = theta_extract(p, 1e-4, 1e4);
    double e_dens = 0, e_G = 0, e_bv = 0, e_th = 0, e_rec = 0;
    for (double x : log_grid(0.05, 50, 25)) {
        e_dens = std::max(e_dens, rel_err(eval_density(p, x), oracle::g_half(x)));
        e_G = std::max(e_G, rel_err(eval_G_real(p, x), oracle::G_half(x)));
        auto b = boundary_value(p, x);
        e_bv = std::max(e_bv, rel_err(b.value(p.delta), oracle::G_half_upper_cut(x)));
        e_th = std::max(e_th, std::fabs(b.theta - 0.5));
        e_rec = std::max(e_rec, rel_err(reconstruct_G(p, th, x).real(), oracle::G_half(x)));
    }
    return {std::max({e_dens, e_G, e_bv, e_th, e_rec}) <= tol,
            "density " + f(e_dens) + ", G " + f(e_G) + ", boundary " + f(e_bv) + ", theta " + f(e_th) +
                ", reconstruct " + f(e_rec) + " (tol 1e-8)"};
}

// Mass of G by double-exponential quadrature, independent of the library's integrators.
double mass_of_G(double a) {
    const auto p = StableParams::one_sided(a);
    const double k = 1 / (1 - a);
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    // x = u^k on (0, 1] removes the x^-alpha endpoint singularity.
    auto head = [&](double u) {
        double x = std::pow(u, k);
        return x > 1e-300 ? eval_G_real(p, x) * k * std::pow(u, k - 1) : k * oracle::c0_of(a);
    };
    auto tail = [&](double x) {
        double y = 1 + x;
        return p.delta * y > 700 ? 0.0 : eval_G_real(p, y);
    };
    return ts.integrate(head, 0.0, 1.0, 1e-12) + es.integrate(tail, 1e-12);
}

// 2. Total mass of G_alpha.
Outcome normalization() {
    constexpr double tol = 1e-6;
    double worst = 0;
    std::string d;
    for (double a : {0.2, 0.35, 0.5, 0.7, 0.85}) {
        double e = std::fabs(mass_of_G(a) - 1);
        worst = std::max(worst, e);
        d += "a=" + f(a) + ":" + f(e) + " ";
    }
    return {worst <= tol, d + "(tol 1e-6)"};
}

// 3. Reconstruction from theta.
Outcome round_trip() {
    constexpr double tol = 1e-4;
    double worst = 0;
    std::string d;
    for (double a : {0.2, 0.35, 0.5, 0.7}) {
        const auto p = StableParams::one_sided(a);
        const auto th = theta_extract(p, 1e-4, 1e4);
        double w = 0;
        for (double x : log_grid(0.01, 100, 30))
            w = std::max(w, rel_err(reconstruct_G(p, th, x).real(), eval_G_real(p, x)));
        worst = std::max(worst, w);
        d += "a=" + f(a) + ":" + f(w) + " ";
    }
    return {worst <= tol, d + "(tol 1e-4)"};
}

// 4. Asymptotic constants and the resolution of c0.
Outcome asymptotic() {
    constexpr double tol = 5e-3;
    bool ok = true;
    std::string d;
    for (double a : {0.3, 0.5, 0.7}) {
        const auto p = StableParams::one_sided(a);
        auto ac = asymptotic_constants(p);
        double e0 = rel_err(ac.c0_fitted, oracle::c0_of(a));
        double ei = rel_err(ac.c_inf_fitted, oracle::c_inf_of(a));
        // (1 - a)/Gamma(1 - a) = Gamma(1 + a) sin(pi a) / (pi beta); the half-size variant must be rejected.
        double resolved = std::tgamma(1 + a) * std::sin(oracle::pi * a) / (oracle::pi * p.beta);
        double e_formula = rel_err(resolved, ac.c0);
        double e_half = rel_err(ac.c0_fitted, resolved / 2);
        ok = ok && e0 <= tol && ei <= tol && e_formula <= 1e-12 && e_half > 0.4;
        d += "a=" + f(a) + ": c0 " + f(e0) + ", cinf " + f(ei) + "; ";
    }
    return {ok, d + "(tol 0.5%)"};
}

// 5. Classification table.
Outcome classification() {
    const std::pair<double, Verdict> table[] = {{0.35, Verdict::HCM},     {0.45, Verdict::HCM},
                                                {0.6, Verdict::AntiHCM},  {0.8, Verdict::AntiHCM},
                                                {0.2, Verdict::Neither},  {0.25, Verdict::Neither},
                                                {0.3, Verdict::Neither}};
    bool ok = true;
    std::string d;
    for (auto [a, want] : table) {
        auto r = classify_alpha(a);
        bool good = r.verdict == want && r.monotonicity_margin > 10;
        ok = ok && good;
        d += f(a) + "->" + to_string(r.verdict) + "(" + f(r.monotonicity_margin) + ") ";
    }
    return {ok, d + "(margin > 10 noise floors)"};
}

// 6. Cross identity between Re G(-r+) and g_{alpha, 1 - 2 alpha}.
Outcome cross_identity() {
    constexpr double tol = 1e-6;
    double worst = 0;
    int n = 0;
    for (double a : {0.25, 0.3, 0.4, 0.6, 0.7})
        for (double r : {0.05, 0.5, 2.0, 10.0}) {
            worst = std::max(worst, std::fabs(cross_check_identity(StableParams::one_sided(a), r)));
            ++n;
        }
    return {worst <= tol && n == 20, std::to_string(n) + " pairs, max residual " + f(worst) + " (tol 1e-6)"};
}

// 7. Scaling identity.
Outcome scaling_identity() {
    constexpr double tol = 1e-5;
    struct T {
        double a, g, d, x;
    };
    const T tuples[] = {{0.25, 0.25, 0.5, 1.0}, {0.3, 0.3, 0.6, 2.0},  {0.25, 0.25, 0.25, 1.0}, {0.2, 0.2, 0.5, 0.5},
                        {0.3, 0.2, 0.7, 1.5},   {0.4, 0.4, 0.8, 0.7},  {0.35, 0.35, 0.5, 3.0},  {0.2, 0.1, 0.4, 1.0},
                        {0.45, 0.45, 0.9, 0.3}};
    double worst = 0;
    int n = 0;
    for (auto t : tuples) {
        worst = std::max(worst, std::fabs(mixture_identity_residual(t.a, t.g, t.d, t.x)));
        ++n;
    }
    double e_half = 0;
    for (auto [a, g, x] : {std::tuple{0.25, 0.25, 1.0}, std::tuple{0.3, 0.2, 0.5}}) {
        e_half = std::max(e_half, std::fabs(half_stable_mixture(a, g, x) - eval_density(StableParams::make(a, g), x)));
        ++n;
    }
    return {std::max(worst, e_half) <= tol && n >= 10,
            std::to_string(n) + " tuples, max residual " + f(worst) + ", half-stable factorization " + f(e_half) +
                " (tol 1e-5)"};
}

// 8. Envelopes and the sampler.
Outcome envelopes() {
    bool ok = true;
    std::string d;
    const auto grid = log_grid(1e-3, 1e3, 200);
    for (double a : {0.2, 0.35, 0.5, 0.7, 0.85}) {
        const auto p = StableParams::one_sided(a);
        auto c = envelope_constants(p, 200);
        auto r = check_envelope(p, c, grid);
        // Splice: the two pieces evaluated at x = 1 from each side bracket G(1).
        double g1 = eval_G_real(p, 1.0);
        double left_hi = c.A_plus * envelope_f1(a, p.delta, 1.0);
        double right_hi = c.B_plus * envelope_f2(p.delta, 1.0 + 1e-12);
        double left_lo = c.A_minus * envelope_f1(a, p.delta, 1.0);
        double right_lo = c.B_minus * envelope_f2(p.delta, 1.0 + 1e-12);
        bool splice = left_lo <= g1 * (1 + 1e-9) && g1 <= left_hi * (1 + 1e-9) && right_lo <= g1 * (1 + 1e-9) &&
                      g1 <= right_hi * (1 + 1e-9);
        // Envelope mass through incomplete gammas against direct quadrature.
        boost::math::quadrature::tanh_sinh<double> ts;
        boost::math::quadrature::exp_sinh<double> es;
        const double k = 1 / (1 - a);
        // x = u^k turns x^-alpha dx into k du.
        double direct = c.A_plus * ts.integrate([&](double u) { return k * std::exp(-p.delta * std::pow(u, k)); }, 0.0,
                                                1.0, 1e-14) +
                        c.B_plus * es.integrate([&](double y) { return envelope_f2(p.delta, 1 + y); }, 1e-14);
        double e_mass = rel_err(envelope_mass(c), direct);
        bool pos = r.ok && r.lower_slack > 0 && r.upper_slack > 0;
        ok = ok && pos && splice && e_mass <= 1e-8;
        d += "a=" + f(a) + ":" + (pos ? "ok" : "FAIL") + (splice ? "" : "/splice") + "/mass " + f(e_mass) + " ";
    }
    for (double a : {0.35, 0.45, 0.6, 0.8}) {
        auto r = sharp_envelope_check(StableParams::one_sided(a), grid);
        bool pos = r.ok && r.lower_slack > 0 && r.upper_slack > 0;
        ok = ok && pos;
        d += "sharp a=" + f(a) + ":" + (pos ? "ok " : "FAIL ");
    }
    const auto p = StableParams::one_sided(0.4);
    const std::size_t n = 100000;
    auto s = sample_inverse_beta_power(p, n, 42, envelope_constants(p, 200));
    double ks = ks_distance(s.x, [&](double x) { return 1 - G_survival(p, x).value; });
    double crit = 1.63 / std::sqrt(double(n));
    ok = ok && ks <= crit;
    d += "KS " + f(ks) + " vs " + f(crit);
    return {ok, d};
}

// 9. Saddle curves and the contour representation.
Outcome saddle() {
    bool ok = true;
    std::string d;
    double res = 0;
    for (auto [a, th] : {std::pair{0.5, 1.0}, std::pair{0.3, 0.6}, std::pair{0.4, -0.8}, std::pair{0.7, 0.5}}) {
        auto c = trace_curves(StableParams::one_sided(a), th, 50, 500);
        res = std::max(res, c.max_residual());
    }
    ok = ok && res <= 1e-8;
    d += "residual " + f(res) + "; ";

    double worst = 0;
    int n = 0;
    const cplx zs[] = {{1, 0}, {2, 1}, {0.5, -0.5}, {std::polar(2.0, oracle::pi / 3)}, {3, -2}};
    for (double a : {0.3, 0.4, 0.5, 0.7})
        for (cplx z : zs) {
            const auto p = StableParams::one_sided(a);
            double th = descent_theta(p, z);
            worst = std::max(worst, rel_err(contour_eval_G(p, z, th), eval_G_complex(p, z)));
            ++n;
        }
    ok = ok && worst <= 1e-4;
    d += std::to_string(n) + " contour pairs max " + f(worst) + "; ";

    const auto p = StableParams::one_sided(0.3);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lr(std::log(0.01), std::log(100.0)), ar(-0.9 * oracle::pi, 0.9 * oracle::pi);
    std::vector<cplx> z;
    for (int i = 0; i < 200; ++i) z.push_back(std::polar(std::exp(lr(rng)), ar(rng)));
    auto b1 = rough_bound_scan(p, std::span(z).first(100));
    auto b2 = rough_bound_scan(p, z);
    double dA = std::fabs(b2.A / b1.A - 1), dB = std::fabs(b2.B / b1.B - 1);
    ok = ok && std::isfinite(b2.A) && std::isfinite(b2.B) && dA <= 0.05 && dB <= 0.05;
    d += "rough bound A " + f(b1.A) + "->" + f(b2.A) + ", B " + f(b1.B) + "->" + f(b2.B);
    return {ok, d};
}

// 10. Property battery.
Outcome properties() {
    bool ok = true;
    std::string d;
    auto grid = geometric_grid(0.1, 10, 1.2);
    auto cm = cm_probe([](double x) { return std::exp(-x); }, grid, 8);
    std::vector<double> lin;
    for (int i = 0; i <= 30; ++i) lin.push_back(0.1 * i);
    std::vector<double> cosv;
    for (double x : lin) cosv.push_back(std::cos(x));
    auto cs = cm_probe_values(lin, cosv, 6);
    bool cs_fail = !cs.pass && cs.first_violation && cs.first_violation->order <= 2;
    ok = ok && cm.pass && cs_fail;
    d += std::string("exp ") + (cm.pass ? "pass" : "FAIL") + ", cos " + (cs_fail ? "violation" : "MISSED") + "; ";

    HcmProbeGrids g;
    g.u = {100, 300};
    g.v = default_v_grid(7, (8 + std::sqrt(60.0)) / 2);
    QuadratureConfig tight;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 0;
    auto probe_G = [&](double a) {
        const auto p = StableParams::one_sided(a);
        return hcm_probe([&](double x) { return G_scaled_descent(p, x, tight).value; }, g, 6, 1e-13);
    };
    auto r4 = probe_G(0.4), r25 = probe_G(0.25);
    bool viol = !r25.pass && r25.first_violation && r25.first_violation->margin < -10;
    ok = ok && r4.pass && viol;
    d += "G0.4 " + std::string(r4.pass ? "pass" : "FAIL") + ", G0.25 " +
         (viol ? "violation margin " + f(r25.first_violation->margin) : std::string("MISSED")) + "; ";

    HcmRepresentation rep;
    rep.theta = ThetaRep::from_function([](double t) { return std::sqrt(t); }, 0.0, 1e300);
    auto tr = truncate_theta(rep, 2.0);
    double env = 1e300;
    for (double x : {0.1, 1.0, 10.0}) {
        double H = eval_hcm(rep, x).real(), Hn = eval_hcm(tr.rep, x).real();
        env = std::min({env, Hn - (1 - tr.eps_n) * H, H * std::exp(tr.eps_n * (x + 1 / x)) - Hn});
    }
    ok = ok && env >= 0;
    d += "truncation slack " + f(env) + "; ";

    double jump = 0;
    for (double a : {0.25, 0.4, 0.7}) {
        const auto p = StableParams::one_sided(a);
        auto th = theta_extract(p, 1e-4, 1e4);
        auto rep_t = ThetaRep::from_table(th);
        for (double r : {0.01, 0.3, 1.7, 20.0}) {
            cplx up = exp_stieltjes(rep_t, cplx(-r, 0.0)), lo = exp_stieltjes(rep_t, cplx(-r, -0.0));
            jump = std::max(jump, std::abs(up / lo - std::exp(cplx(0, -2 * oracle::pi * th(r)))));
        }
    }
    ok = ok && jump <= 1e-6;
    d += "boundary jump " + f(jump);
    return {ok, d};
}

}  // namespace

int main() {
    struct C {
        const char* name;
        std::function<Outcome()> fn;
        double limit_s;
    };
    const C criteria[] = {{"closed-form golden", closed_form_golden, 10},
                          {"normalization", normalization, 30},
                          {"round trip", round_trip, 300},
                          {"asymptotic constants", asymptotic, 600},
                          {"classification table", classification, 600},
                          {"cross identity", cross_identity, 600},
                          {"scaling identity", scaling_identity, 600},
                          {"envelopes and sampler", envelopes, 600},
                          {"saddle module", saddle, 600},
                          {"property suites", properties, 600}};
    int failed = 0;
    for (int i = 0; i < 10; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > criteria[i].limit_s) {
            o.pass = false;
            o.detail += " [over time budget]";
        }
        failed += !o.pass;
        std::printf("%s criterion %d: %s | %s | %.2fs\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
