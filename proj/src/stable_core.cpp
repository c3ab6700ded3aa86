#include "stablehcm/stable_core.hpp"

#include <cmath>
#include <limits>
#include <functional>
#include <numbers>
#include <vector>

#include "stablehcm/saddle.hpp"

namespace stablehcm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double max_cond = 1e4;

std::vector<double> geometric_breaks(double scale, int lo, int hi) {
    std::vector<double> b;
    for (int j = lo; j <= hi; ++j) b.push_back(std::ldexp(scale, j));
    return b;
}

// Sum of panel integrals between consecutive zeros zero(k), k = 0, 1, ...
// `env` bounds |f| pointwise and is used for truncation once it decreases.
template <class F, class Z, class E>
QuadResult<double> panel_sum(F&& f, Z&& zero, E&& env, const std::vector<double>& first_breaks,
                             const QuadratureConfig& cfg, int max_panels = 4000) {
    QuadResult<double> out;
    std::vector<double> partial;
    double prev_env = std::numeric_limits<double>::infinity();
    for (int k = 0; k < max_panels; ++k) {
        double a = zero(k), b = zero(k + 1);
        auto q = k == 0 ? integrate(f, a, b, cfg, first_breaks) : integrate(f, a, b, cfg);
        out.value += q.value;
        out.abs_error += q.abs_error;
        out.l1 += q.l1;
        out.subdivisions += q.subdivisions;
        out.converged = out.converged && q.converged;
        partial.push_back(out.value);
        double e = env(b);
        double width = zero(k + 2) - b;
        double scale = std::max(std::fabs(out.value), cfg.abs_tol);
        if (e <= prev_env && e * width <= cfg.truncation_tail_tol * scale) return out;
        if (e <= prev_env && partial.size() >= 40 && partial.size() % 10 == 0) {
            auto [acc, err] = wynn_epsilon(std::vector<double>(partial.end() - 30, partial.end()));
            if (err <= cfg.rel_tol * std::fabs(acc) * 0.1) {
                out.abs_error += err;
                out.value = acc;
                return out;
            }
        }
        prev_env = e;
    }
    out.converged = false;
    return out;
}

double log_peak(double alpha, double k) {
    // max_t (k t^alpha - t) for k > 0.
    if (k <= 0) return 0.0;
    return (1 - alpha) * std::pow(alpha, alpha / (1 - alpha)) * std::pow(k, 1 / (1 - alpha));
}

// Rotated-ray evaluation of (1/pi) Im int exp(-r t - t^alpha e^{-i pi gamma}) dt.
bool rotated_density(const StableParams& p, double r, const QuadratureConfig& cfg, QuadResult<double>& out) {
    const double a = p.alpha, g = p.gamma;
    double lo = std::max(-pi / 2, (pi * g - pi / 2) / a);
    double hi = std::min(pi / 2, (pi * g + pi / 2) / a);
    if (!(lo < hi)) return false;
    const double phi = 0.5 * (lo + hi);
    const cplx e1 = std::polar(1.0, phi), e2 = std::polar(1.0, a * phi - pi * g);
    auto f = [&](double u) -> cplx {
        if (u <= 0) return 0.0;
        double lu = std::log(u);
        double s = std::exp(lu / a);
        return std::exp((1 / a - 1) * lu - r * e1 * s - u * e2);
    };
    double h0 = std::min(1.0, std::pow(r, -a));
    auto br = geometric_breaks(h0, -6, 0);
    auto q = integrate_to_infinity(f, 0.0, h0, cfg, br);
    out.value = std::imag(e1 * q.value) / (pi * a);
    out.abs_error = q.abs_error / (pi * a);
    out.l1 = q.l1 / (pi * a);
    out.subdivisions = q.subdivisions;
    out.converged = q.converged;
    return true;
}

// g(r) = (1/pi) sum (-1)^(n+1) sin(n pi alpha) Gamma(1 + n alpha)/n! r^(-n alpha - 1).
QuadResult<double> density_large_r(const StableParams& p, double r) {
    const double a = p.alpha, lr = std::log(r);
    double sum = 0, mag = 0;
    for (int n = 1; n < 400; ++n) {
        double lm = std::lgamma(1 + n * a) - std::lgamma(n + 1.0) - (n - 1) * a * lr;
        double t = (n % 2 ? 1.0 : -1.0) * std::sin(n * pi * a) * std::exp(lm);
        sum += t;
        mag += std::fabs(t);
        if (n > 3 && std::exp(lm) < 1e-18 * std::fabs(sum)) break;
    }
    QuadResult<double> q;
    const double pref = std::exp(-(a + 1) * lr) / pi;
    q.value = pref * sum;
    q.l1 = pref * mag;
    q.abs_error = 4 * std::numeric_limits<double>::epsilon() * q.l1;
    q.converged = std::isfinite(q.value);
    return q;
}

QuadResult<double> positive_density(const StableParams& p, double r, const QuadratureConfig& cfg) {
    if (std::pow(r, -p.alpha) < 1e-3) return density_large_r(p, r);
    // g(r) = beta x^{1/alpha} G(x), x = r^{-beta}.
    const double x = std::pow(r, -p.beta);
    auto gs = G_scaled_descent(p, x, cfg);
    double lf = std::log(p.beta) + std::log(x) / p.alpha - p.delta * x;
    QuadResult<double> out = gs;
    double f = std::exp(lf);
    out.value = gs.value * f;
    out.abs_error = gs.abs_error * f;
    out.l1 = gs.l1 * f;
    return out;
}

bool acceptable(const QuadResult<double>& q) { return q.converged && std::isfinite(q.value) && q.condition() <= max_cond; }

}  // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Quadrature: return "quadrature";
        case Regime::Descent: return "descent";
        case Regime::Series: return "series";
    }
    return "?";
}

StableParams StableParams::make(double alpha, double gamma) {
    if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0,1)");
    if (!(std::fabs(gamma) <= 1)) throw DomainError("gamma must lie in [-1,1]");
    StableParams p;
    p.alpha = alpha;
    p.gamma = gamma;
    p.beta = alpha / (1 - alpha);
    p.t0 = std::pow(alpha, 1 / (1 - alpha));
    p.delta = (1 - alpha) * std::pow(alpha, alpha / (1 - alpha));
    return p;
}

double descent_phase(double alpha, double psi) {
    if (psi <= 0) return (1 - alpha) * std::pow(alpha, alpha / (1 - alpha));
    const double s1 = std::sin(alpha * psi), s = std::sin(psi), s2 = std::sin((1 - alpha) * psi);
    return std::exp((std::log(s1) - std::log(s)) / (1 - alpha)) * s2 / s1;
}

namespace {

// log(sin(x) / x) without cancellation near 0.
double log_sinc(double x) {
    if (x >= 0.5) return std::log(std::sin(x) / x);
    double x2 = x * x, term = 1.0, sum = 0.0;
    for (int k = 1; k < 20; ++k) {
        term *= -x2 / ((2 * k) * (2 * k + 1));
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return std::log1p(sum);
}

// A(psi) - delta.
double descent_excess(double alpha, double psi, double delta) {
    double L = (log_sinc(alpha * psi) - log_sinc(psi)) / (1 - alpha) + log_sinc((1 - alpha) * psi) -
               log_sinc(alpha * psi);
    return delta * std::expm1(L);
}

std::vector<double> descent_breaks(double alpha, double x) {
    std::vector<double> b;
    for (int j = -3; j <= 8; ++j) {
        double l = std::ldexp(1.0, j) / std::sqrt(x);
        if (l < 0.9 * pi) b.push_back(l);
        double r = pi - std::ldexp(std::pow(x, 1 - alpha), j);
        if (r > 0.1 && r < pi) b.push_back(r);
    }
    b.push_back(pi / 2);
    return b;
}

}  // namespace

QuadResult<double> G_small_series(const StableParams& p, double x) {
    if (!(x > 0)) throw DomainError("x must be positive");
    const double a = p.alpha, y = std::pow(x, 1 - a), ly = std::log(y);
    double sum = 0, mag = 0;
    for (int n = 1; n < 400; ++n) {
        double lm = std::lgamma(1 + n * a) - std::lgamma(n + 1.0) + (n - 1) * ly;
        double t = (n % 2 ? 1.0 : -1.0) * std::sin(n * pi * a) * std::exp(lm);
        sum += t;
        mag += std::fabs(t);
        if (n > 3 && std::exp(lm) < 1e-18 * std::fabs(sum)) break;
    }
    QuadResult<double> q;
    const double pref = std::pow(x, -a) / (pi * p.beta);
    q.value = pref * sum;
    q.l1 = pref * mag;
    q.abs_error = 4 * std::numeric_limits<double>::epsilon() * q.l1;
    q.converged = std::isfinite(q.value);
    return q;
}

QuadResult<double> G_scaled_descent(const StableParams& p, double x, const QuadratureConfig& cfg) {
    if (!(x > 0)) throw DomainError("x must be positive");
    const double a = p.alpha, d = p.delta;
    auto f = [&](double psi) {
        double ex = psi < 1.0 ? descent_excess(a, psi, d) : descent_phase(a, psi) - d;
        double e = x * ex;
        return e > 745 ? 0.0 : (d + ex) * std::exp(-e);
    };
    auto br = descent_breaks(a, x);
    auto q = integrate(f, 0.0, pi, cfg, br);
    q.value /= pi;
    q.abs_error /= pi;
    q.l1 /= pi;
    return q;
}

QuadResult<double> G_survival(const StableParams& p, double x, const QuadratureConfig& cfg) {
    if (!(x > 0)) throw DomainError("x must be positive");
    const double a = p.alpha;
    auto f = [&](double psi) {
        double e = x * descent_phase(a, psi);
        return e > 745 ? 0.0 : std::exp(-e);
    };
    auto br = descent_breaks(a, x);
    auto q = integrate(f, 0.0, pi, cfg, br);
    q.value /= pi;
    q.abs_error /= pi;
    q.l1 /= pi;
    return q;
}

QuadResult<double> density_panels(const StableParams& p, double r, Substitution sub, const QuadratureConfig& cfg) {
    if (!(r > 0)) throw DomainError("r must be positive");
    const double a = p.alpha;
    const double c = std::cos(pi * p.gamma), s = std::sin(pi * p.gamma);
    const double as = std::fabs(s);
    if (as == 0.0) return {};
    if (sub == Substitution::U) {
        auto f = [&](double u) {
            if (u <= 0) return 0.0;
            double lu = std::log(u);
            return std::exp((1 / a - 1) * lu - r * std::exp(lu / a) - c * u) * std::sin(s * u) / (pi * a);
        };
        auto zero = [&](int k) { return k * pi / as; };
        auto env = [&](double u) {
            double lu = std::log(u);
            return std::exp((1 / a - 1) * lu - r * std::exp(lu / a) - c * u) / (pi * a);
        };
        double sc = std::min(std::pow(r, -a), 1.0 / as);
        return panel_sum(f, zero, env, geometric_breaks(sc, -8, 4), cfg);
    }
    auto f = [&](double t) {
        if (t <= 0) return 0.0;
        double ta = std::pow(t, a);
        return std::exp(-r * t - c * ta) * std::sin(s * ta) / pi;
    };
    auto zero = [&](int k) { return std::pow(k * pi / as, 1 / a); };
    auto env = [&](double t) { return std::exp(-r * t - c * std::pow(t, a)) / pi; };
    double sc = std::min(1 / r, zero(1));
    return panel_sum(f, zero, env, geometric_breaks(sc, -16, 4), cfg);
}

Evaluation eval_density_detail(const StableParams& p, double r, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(r > 0)) throw DomainError("r must be positive");
    Evaluation ev;
    const double s = std::sin(pi * p.gamma);
    if (p.gamma == 0.0 || std::fabs(p.gamma) == 1.0 || s == 0.0) return ev;
    const double c = std::cos(pi * p.gamma);
    if (p.one_sided_law()) {
        if (c > 0) {
            auto q = density_panels(p, r, Substitution::U, cfg);
            if (acceptable(q)) {
                ev.value = q.value;
                ev.abs_error = q.abs_error;
                return ev;
            }
        }
        auto q = positive_density(p, r, cfg);
        ev.value = q.value;
        ev.abs_error = q.abs_error;
        ev.regime = std::pow(r, -p.alpha) < 1e-3 ? Regime::Series : Regime::Descent;
        return ev;
    }
    QuadResult<double> best;
    bool have = false;
    if (c > 0 || log_peak(p.alpha, -c * std::pow(r, -p.alpha)) < 9) {
        best = density_panels(p, r, Substitution::U, cfg);
        have = true;
    }
    if (!have || !acceptable(best)) {
        QuadResult<double> rot;
        if (rotated_density(p, r, cfg, rot) && rot.converged &&
            (!have || rot.condition() < best.condition() || !best.converged)) {
            best = rot;
            have = true;
        }
    }
    if (!have) best = density_panels(p, r, Substitution::U, cfg);
    if (!best.converged || !std::isfinite(best.value) || best.condition() > 1e10)
        throw NumericalError(ErrorKind::NonConvergence, "density quadrature did not converge", best.abs_error);
    ev.value = best.value;
    ev.abs_error = best.abs_error + best.l1 * 1e-16 * 10;
    return ev;
}

double eval_density(const StableParams& p, double r, const QuadratureConfig& cfg) {
    return eval_density_detail(p, r, cfg).value;
}

double eval_tail(const StableParams& p, double x, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(x > 0)) throw DomainError("x must be positive");
    const double a = p.alpha;
    const double c = std::cos(pi * p.gamma), s = std::sin(pi * p.gamma);
    if (p.one_sided_law()) {
        const double y = std::pow(x, -p.beta);
        auto f = [&](double psi) { return -std::expm1(-y * descent_phase(a, psi)); };
        auto br = descent_breaks(a, y);
        auto q = integrate(f, 0.0, pi, cfg, br);
        if (!q.converged) throw NumericalError(ErrorKind::NonConvergence, "tail quadrature did not converge", q.abs_error);
        return q.value / pi;
    }
    if (s == 0.0) return 0.0;
    if (c <= 0) throw DomainError("tail representation requires |gamma| < 1/2 or gamma = alpha");
    const double as = std::fabs(s);
    auto f = [&](double u) {
        if (u <= 0) return s / (pi * a);
        return std::exp(-x * std::pow(u, 1 / a) - c * u) * std::sin(s * u) / (pi * a * u);
    };
    auto zero = [&](int k) { return k * pi / as; };
    auto env = [&](double u) { return std::exp(-x * std::pow(u, 1 / a) - c * u) / (pi * a * u); };
    auto q = panel_sum(f, zero, env, geometric_breaks(std::min(std::pow(x, -a), 1 / as), -8, 4), cfg);
    if (!q.converged) throw NumericalError(ErrorKind::NonConvergence, "tail quadrature did not converge", q.abs_error);
    return q.value;
}

QuadResult<double> G_direct(const StableParams& p, double x, const QuadratureConfig& cfg) {
    if (!(x > 0)) throw DomainError("x must be positive");
    const double a = p.alpha;
    const double c = std::cos(pi * a), s = std::sin(pi * a);
    const double X = std::pow(x, 1 - a);
    const double pref = 1 / (pi * p.beta * x);
    auto f = [&](double u) {
        if (u <= 0) return 0.0;
        double ua = std::pow(u, a) * X;
        return pref * std::exp(-u - c * ua) * std::sin(s * ua);
    };
    auto zero = [&](int k) { return std::pow(k * pi / (s * X), 1 / a); };
    auto env = [&](double u) { return pref * std::exp(-u - c * std::pow(u, a) * X); };
    double sc = std::min(1.0, zero(1));
    return panel_sum(f, zero, env, geometric_breaks(sc, -16, 6), cfg);
}

Evaluation eval_G_real_detail(const StableParams& p, double x, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(x > 0)) throw DomainError("x must be positive");
    if (!p.one_sided_law()) throw DomainError("G is defined for gamma = alpha");
    const double a = p.alpha, c = std::cos(pi * a);
    Evaluation ev;
    if (std::pow(x, 1 - a) < 1e-3) {
        auto q = G_small_series(p, x);
        ev.value = q.value;
        ev.abs_error = q.abs_error;
        ev.regime = Regime::Series;
        return ev;
    }
    bool try_quad = (c >= 0 || log_peak(a, -c * std::pow(x, 1 - a)) < 9) && p.delta * x < 700;
    QuadResult<double> via_density, direct;
    bool ok_d = false, ok_e = false;
    if (try_quad) {
        const double y = std::pow(x, -1 / p.beta);
        const double pref = std::pow(x, -1 / a) / p.beta;
        if (std::isfinite(pref) && y > 0 && std::isfinite(y)) {
            via_density = density_panels(p, y, Substitution::U, cfg);
            via_density.value *= pref;
            via_density.abs_error *= pref;
            via_density.l1 *= pref;
            ok_d = acceptable(via_density) && via_density.value > 0;
        }
        direct = G_direct(p, x, cfg);
        ok_e = acceptable(direct) && direct.value > 0;
    }
    auto agree = [&](double u, double eu, double v, double evv) {
        return std::fabs(u - v) <= 10 * (eu + evv + cfg.rel_tol * std::fabs(u)) + 1e-13 * std::fabs(u);
    };
    if (ok_d && ok_e) {
        if (!agree(via_density.value, via_density.abs_error, direct.value, direct.abs_error))
            throw NumericalError(ErrorKind::CrossValidation, "G quadrature paths disagree",
                                 std::fabs(via_density.value - direct.value));
        ev.value = via_density.value;
        ev.abs_error = via_density.abs_error;
        ev.cross_checked = true;
        return ev;
    }
    auto gs = G_scaled_descent(p, x, cfg);
    if (!gs.converged) throw NumericalError(ErrorKind::NonConvergence, "descent quadrature did not converge", gs.abs_error);
    const double damp = std::exp(-p.delta * x);
    const double dv = gs.value * damp, de = gs.abs_error * damp;
    if (ok_d || ok_e) {
        const auto& q = ok_d ? via_density : direct;
        if (!agree(q.value, q.abs_error, dv, de))
            throw NumericalError(ErrorKind::CrossValidation, "G quadrature disagrees with descent integral",
                                 std::fabs(q.value - dv));
        ev.value = q.value;
        ev.abs_error = q.abs_error;
        ev.cross_checked = true;
        return ev;
    }
    ev.value = dv;
    ev.abs_error = de;
    ev.regime = Regime::Descent;
    return ev;
}

double eval_G_real(const StableParams& p, double x, const QuadratureConfig& cfg) {
    return eval_G_real_detail(p, x, cfg).value;
}

QuadResult<cplx> G_complex_direct(const StableParams& p, cplx z, const QuadratureConfig& cfg) {
    const double a = p.alpha;
    const cplx zeta = std::pow(z, 1 - a);
    const cplx em = std::polar(1.0, -pi * a) * zeta, ep = std::polar(1.0, pi * a) * zeta;
    auto f = [&](double t) -> cplx {
        if (t <= 0) return 0.0;
        double ta = std::pow(t, a);
        return std::exp(-t - em * ta) - std::exp(-t - ep * ta);
    };
    double sc = std::min(1.0, std::pow(std::abs(zeta), -1 / a));
    auto br = geometric_breaks(sc, -16, 4);
    auto q = integrate_to_infinity(f, 0.0, 1.0, cfg, br);
    const cplx pref = 1.0 / (cplx(0, 2 * pi * p.beta) * z);
    q.value *= pref;
    q.abs_error *= std::abs(pref);
    q.l1 *= std::abs(pref);
    return q;
}

cplx eval_G_complex(const StableParams& p, cplx z, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!p.one_sided_law()) throw DomainError("G is defined for gamma = alpha");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("z must be finite");
    if (z.imag() == 0.0) {
        if (z.real() <= 0) throw DomainError("z lies on the cut (-inf, 0]");
        return eval_G_real(p, z.real(), cfg);
    }
    if (z.imag() < 0) return std::conj(eval_G_complex(p, std::conj(z), cfg));
    auto q = G_complex_direct(p, z, cfg);
    if (q.converged && q.condition() <= max_cond) return q.value;
    return contour_eval_G(p, z, descent_theta(p, z), cfg);
}

namespace {

double g_one(double gamma, double y) {
    const double c = std::cos(pi * gamma), s = std::sin(pi * gamma);
    return s / (pi * ((y + c) * (y + c) + s * s));
}

// int_{-inf}^{inf} f(e^s) e^s ds split at s = 0, panels doubling outward.
template <class F>
QuadResult<double> log_line(F&& f, const QuadratureConfig& cfg) {
    auto g = [&](double s) { return f(std::exp(s)) * std::exp(s); };
    auto gm = [&](double s) { return g(-s); };
    auto hi = integrate_to_infinity(g, 0.0, 1.0, cfg, {}, 9);
    auto lo = integrate_to_infinity(gm, 0.0, 1.0, cfg, {}, 9);
    QuadResult<double> out;
    out.value = hi.value + lo.value;
    out.abs_error = hi.abs_error + lo.abs_error;
    out.l1 = hi.l1 + lo.l1;
    out.subdivisions = hi.subdivisions + lo.subdivisions;
    out.converged = hi.converged && lo.converged;
    return out;
}

}  // namespace

double mixture_identity_residual(double alpha, double gamma, double dp, double x, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0 && alpha <= dp && dp < 1)) throw DomainError("need 0 < alpha <= delta' < 1");
    if (!(x > 0)) throw DomainError("x must be positive");
    const auto pg = StableParams::make(alpha, gamma);
    const auto pd = StableParams::one_sided(dp);
    const auto inner = cfg.with_rel_tol(std::min(cfg.rel_tol, 1e-11));
    auto f = [&](double y) {
        if (!(y > 0) || !(x * y > 0) || !std::isfinite(x * y)) return 0.0;
        double gd = eval_density(pd, y, inner);
        if (gd == 0.0) return 0.0;
        return eval_density(pg, x * y, inner) * gd * y;
    };
    auto q = log_line(f, cfg.with_rel_tol(std::max(cfg.rel_tol, 1e-9)));
    if (!q.converged) throw NumericalError(ErrorKind::NonConvergence, "mixture quadrature did not converge", q.abs_error);
    const double ratio = alpha / dp;
    const double xd = std::pow(x, dp);
    double rhs = ratio >= 1.0 ? g_one(gamma, xd) : eval_density(StableParams::make(ratio, gamma), xd, inner);
    rhs *= std::pow(x, dp - 1);
    return q.value - rhs;
}

double half_stable_mixture(double alpha, double gamma, double x, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(alpha > 0 && alpha <= 0.5)) throw DomainError("half_stable_mixture needs 0 < alpha <= 1/2");
    if (!(std::fabs(gamma) <= 0.5)) throw DomainError("half_stable_mixture needs |gamma| <= 1/2");
    if (!(x > 0)) throw DomainError("x must be positive");
    if (alpha == 0.5 && std::fabs(gamma) == 0.5) return eval_density(StableParams::make(alpha, gamma), x, cfg);
    const double a2 = 2 * alpha, g2 = 2 * gamma;
    const auto inner = cfg.with_rel_tol(std::min(cfg.rel_tol, 1e-11));
    std::function<double(double)> g;
    if (a2 == 1.0) {
        g = [g2](double y) { return g_one(g2, y); };
    } else {
        const auto pp = StableParams::make(a2, g2);
        g = [pp, inner](double y) { return eval_density(pp, y, inner); };
    }
    const double norm = 2 * alpha / (2 * std::sqrt(pi) * std::pow(x, alpha + 1));
    auto f = [&](double y) {
        if (!(y > 0)) return 0.0;
        double e = std::pow(y / x, a2) / 4;
        if (e > 745) return 0.0;
        return g(y) * std::exp(-e) * std::pow(y, alpha);
    };
    auto q = log_line(f, cfg.with_rel_tol(std::max(cfg.rel_tol, 1e-9)));
    if (!q.converged) throw NumericalError(ErrorKind::NonConvergence, "mixture quadrature did not converge", q.abs_error);
    return norm * q.value;
}

}  // namespace stablehcm
