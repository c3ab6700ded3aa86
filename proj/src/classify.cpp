#include "stablehcm/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stablehcm/hcm.hpp"

namespace stablehcm {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::HCM: return "HCM";
        case Verdict::AntiHCM: return "AntiHCM";
        case Verdict::Neither: return "Neither";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

// Turning points whose swing on both sides exceeds `sig`.
std::vector<ThetaExtremum> zigzag(const std::vector<double>& r, const std::vector<double>& th, double sig,
                                  double floor) {
    std::vector<size_t> piv{0};
    size_t e = 0;
    int trend = 0;
    for (size_t i = 1; i < th.size(); ++i) {
        if (trend == 0) {
            if (std::fabs(th[i] - th[0]) > sig) {
                trend = th[i] > th[0] ? 1 : -1;
                e = i;
            }
        } else if (trend * (th[i] - th[e]) > 0) {
            e = i;
        } else if (trend * (th[e] - th[i]) > sig) {
            piv.push_back(e);
            e = i;
            trend = -trend;
        }
    }
    if (trend != 0) piv.push_back(e);
    std::vector<ThetaExtremum> out;
    for (size_t k = 1; k + 1 < piv.size(); ++k) {
        size_t i = piv[k];
        double prom = std::min(std::fabs(th[i] - th[piv[k - 1]]), std::fabs(th[i] - th[piv[k + 1]]));
        out.push_back({r[i], th[i], th[i] > th[piv[k - 1]], prom / floor});
    }
    return out;
}

}  // namespace

ClassificationReport classify_alpha(double alpha, const QuadratureConfig& cfg, const ClassifyOptions& opt) {
    cfg.validate();
    if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0, 1)");
    const auto p = StableParams::one_sided(alpha);
    ClassificationReport rep;
    rep.alpha = alpha;
    rep.evidence_grid = theta_extract(p, opt.r_min, opt.r_max, cfg, opt.theta);
    const auto& tf = rep.evidence_grid;
    double floor = cfg.rel_tol / std::numbers::pi;
    for (double v : tf.noise) floor = std::max(floor, v);
    rep.noise_floor = floor;
    // The declared limits alpha and 1/2 bracket the sampled values.
    std::vector<double> r{0.0}, th{tf.left_limit};
    r.insert(r.end(), tf.nodes.begin(), tf.nodes.end());
    th.insert(th.end(), tf.theta.begin(), tf.theta.end());
    r.push_back(std::numeric_limits<double>::infinity());
    th.push_back(tf.right_limit);
    double run_min = th[0], run_max = th[0];
    for (size_t i = 1; i < th.size(); ++i) {
        rep.run_up = std::max(rep.run_up, th[i] - run_min);
        rep.drawdown = std::max(rep.drawdown, run_max - th[i]);
        run_min = std::min(run_min, th[i]);
        run_max = std::max(run_max, th[i]);
    }
    const double sig = 10 * floor;
    rep.theta_extrema = zigzag(r, th, sig, floor);
    const bool up = rep.run_up > sig, down = rep.drawdown > sig;
    if (up && down) {
        rep.verdict = Verdict::Neither;
        rep.monotonicity_margin = std::min(rep.run_up, rep.drawdown) / floor;
    } else if (up) {
        rep.verdict = Verdict::HCM;
        rep.monotonicity_margin = rep.run_up / floor;
    } else if (down) {
        rep.verdict = Verdict::AntiHCM;
        rep.monotonicity_margin = rep.drawdown / floor;
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.monotonicity_margin = std::max(rep.run_up, rep.drawdown) / floor;
    }
    return rep;
}

std::optional<SignWitness> sign_change_scan(double alpha, double gamma, std::pair<double, double> range,
                                            const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0 && alpha < 1 && gamma > 0 && gamma <= 1)) throw DomainError("need 0 < alpha < 1, 0 < gamma <= 1");
    auto [lo, hi] = range;
    if (!(lo > 0 && hi > lo)) throw DomainError("scan range must satisfy 0 < lo < hi");
    const auto p = StableParams::make(alpha, gamma);
    const bool predicted = alpha < std::min(gamma, 0.5);
    auto sign_of = [&](double x, double& g) {
        Evaluation ev;
        try {
            ev = eval_density_detail(p, x, cfg);
        } catch (const NumericalError&) {
            g = 0;
            return 0;
        }
        g = ev.value;
        if (std::fabs(ev.value) <= 10 * ev.abs_error) return 0;
        return ev.value > 0 ? 1 : -1;
    };
    for (int n : {200, 800, 3200}) {
        double prev_x = lo, prev_g = 0;
        int prev_s = sign_of(lo, prev_g);
        for (int i = 1; i < n; ++i) {
            double x = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)), g;
            int s = sign_of(x, g);
            if (s != 0 && prev_s != 0 && s != prev_s) {
                // Bisect the bracket in log x.
                double a = prev_x, b = x, ga = prev_g, gb = g;
                int sa = prev_s;
                for (int it = 0; it < 30; ++it) {
                    double m = std::sqrt(a * b), gm;
                    int sm = sign_of(m, gm);
                    if (sm == 0) break;
                    if (sm == sa) {
                        a = m;
                        ga = gm;
                    } else {
                        b = m;
                        gb = gm;
                    }
                }
                SignWitness w;
                if (ga > 0) w = {a, b, ga, gb};
                else w = {b, a, gb, ga};
                return w;
            }
            if (s != 0) {
                prev_s = s;
                prev_x = x;
                prev_g = g;
            }
        }
        if (!predicted) break;
    }
    if (predicted)
        throw NumericalError(ErrorKind::ScanExhausted, "predicted sign change not found in the scanned range", hi);
    return std::nullopt;
}

GgcDiagnostic ggc_failure_diag(double alpha, const QuadratureConfig& cfg, int n_points, double r_factor) {
    cfg.validate();
    if (!(alpha > 0.5 && alpha < 1)) throw DomainError("the GGC diagnostic needs alpha in (1/2, 1)");
    if (n_points < 3 || !(r_factor > 1)) throw DomainError("need at least 3 points and r_factor > 1");
    const auto p = StableParams::one_sided(alpha);
    GgcDiagnostic d;
    d.alpha = alpha;
    double prev = 0;
    for (int k = 1; k <= n_points; ++k) {
        double r = p.delta * (1 + (r_factor - 1) * k / n_points);
        cplx v = laplace_of_G(p, cplx(-r, 0.0), cfg);
        double a = -std::arg(v);
        if (k > 1) a += 2 * std::numbers::pi * std::round((prev - a) / (2 * std::numbers::pi));
        prev = a;
        d.r.push_back(r);
        d.neg_arg.push_back(a);
    }
    const double noise = 100 * cfg.rel_tol;
    d.margin = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < d.neg_arg.size(); ++k)
        d.margin = std::min(d.margin, (d.neg_arg[k] - d.neg_arg[k + 1]) / noise);
    d.argument_monotone_decreasing = d.margin > 10;
    d.conclusion = d.argument_monotone_decreasing ? "not GGC" : "inconclusive";
    return d;
}

}  // namespace stablehcm
