#include "stablehcm/saddle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace stablehcm {

namespace {

constexpr double pi = std::numbers::pi;

double arg_plus(cplx v) {
    double a = std::atan2(v.imag(), v.real());
    return a < 0 ? a + 2 * pi : a;
}

double arg_minus(cplx v) {
    double a = std::atan2(v.imag(), v.real());
    if (v.imag() == 0.0 && v.real() < 0) return -pi;
    return a > 0 ? a - 2 * pi : a;
}

// Dense continuation of one branch of f(v) = r e^{i pi theta}, theta in (0, 1].
struct Tracer {
    PhaseFunction f;
    double theta;
    double sign;  // +1 for v+, -1 for v-
    cplx dir;     // e^{i pi theta}

    Tracer(const StableParams& p, double th, Branch b)
        : f(PhaseFunction::make(p.alpha, b)), theta(th), sign(b == Branch::Plus ? 1.0 : -1.0),
          dir(std::polar(1.0, pi * th)) {}

    cplx seed(double r) const {
        return f.t0 + sign * std::sqrt(2 * f.t0 * r / (1 - f.alpha)) * std::polar(1.0, pi * theta / 2);
    }

    bool newton(double r, cplx& v, int max_iter) const {
        const cplx w = r * dir;
        for (int i = 0; i < max_iter; ++i) {
            cplx d = (f(v) - w) / f.derivative(v);
            v -= d;
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
            if (std::abs(d) <= 1e-15 * std::max(1.0, std::abs(v))) return true;
        }
        return std::abs(f(v) - w) <= 1e-12 * std::max(1.0, r);
    }

    // Advance from (ra, va) to rb with midpoint predictor and Newton corrector.
    bool step(double ra, cplx va, double rb, cplx& vb) const {
        const double h = rb - ra;
        cplx k1 = dir / f.derivative(va);
        cplx vm = va + 0.5 * h * k1;
        cplx k2 = dir / f.derivative(vm);
        vb = va + h * k2;
        return newton(rb, vb, 5);
    }

    cplx advance(double ra, cplx va, double rb) const {
        double r = ra;
        cplx v = va;
        double h = rb - ra;
        int halvings = 0;
        while (r < rb) {
            double target = std::min(rb, r + h);
            cplx nv;
            if (step(r, v, target, nv) && (sign < 0 || nv.imag() >= -1e-12 * std::abs(nv))) {
                r = target;
                v = nv;
                h *= 1.5;
            } else {
                h *= 0.5;
                if (++halvings > 60)
                    throw NumericalError(ErrorKind::Continuation, "saddle continuation failed to converge", r);
            }
        }
        return v;
    }

    cplx at_small(double r) const {
        cplx v = seed(r);
        if (!newton(r, v, 30)) throw NumericalError(ErrorKind::Continuation, "saddle seed did not converge", r);
        return v;
    }
};

struct DenseCurve {
    std::vector<double> r;
    std::vector<cplx> v;
};

DenseCurve dense_trace(const Tracer& tr, double r_max) {
    DenseCurve c;
    double r = std::min(1e-8 * std::max(tr.f.t0, 1e-3), r_max);
    cplx v = tr.at_small(r);
    c.r.push_back(r);
    c.v.push_back(v);
    while (r < r_max) {
        double nr = std::min(r_max, r * 1.02);
        v = tr.advance(r, v, nr);
        r = nr;
        c.r.push_back(r);
        c.v.push_back(v);
    }
    return c;
}

cplx solve_near(const Tracer& tr, const DenseCurve& c, double r) {
    if (r <= c.r.front()) return tr.at_small(std::max(r, 1e-300));
    auto it = std::upper_bound(c.r.begin(), c.r.end(), r);
    size_t k = static_cast<size_t>(std::distance(c.r.begin(), it)) - 1;
    if (k >= c.r.size()) k = c.r.size() - 1;
    if (r > c.r.back()) return tr.advance(c.r.back(), c.v.back(), r);
    cplx v = c.v[k] + (r - c.r[k]) * tr.dir / tr.f.derivative(c.v[k]);
    if (!tr.newton(r, v, 40)) return tr.advance(c.r[k], c.v[k], r);
    return v;
}

void check_theta(const StableParams& p, double theta) {
    double t = std::fabs(theta);
    if (!(t > theta_band(p.alpha) && t <= 1.0))
        throw DomainError("|theta| must lie in ((1/2 - alpha)^+, 1]");
}

}  // namespace

PhaseFunction PhaseFunction::make(double alpha, Branch b) {
    auto p = StableParams::one_sided(alpha);
    return PhaseFunction{alpha, p.delta, p.t0, b};
}

cplx PhaseFunction::power(cplx v) const {
    double m = std::abs(v);
    if (m == 0.0) return 0.0;
    double a = branch == Branch::Plus ? arg_plus(v) : arg_minus(v);
    return std::polar(std::pow(m, alpha), alpha * a);
}

double theta_band(double alpha) { return std::max(0.0, 0.5 - alpha); }

double SaddleCurve::max_residual() const {
    const auto fp = PhaseFunction::make(alpha, Branch::Plus);
    const auto fm = PhaseFunction::make(alpha, Branch::Minus);
    double worst = 0;
    for (size_t k = 0; k < r.size(); ++k) {
        cplx w = r[k] * std::polar(1.0, pi * theta);
        worst = std::max({worst, std::abs(fp(v_plus[k]) - w), std::abs(fm(v_minus[k]) - w)});
    }
    return worst;
}

SaddleCurve trace_curves(const StableParams& p, double theta, double r_max, int n_steps) {
    check_theta(p, theta);
    if (!(r_max > 0)) throw DomainError("r_max must be positive");
    if (n_steps < 2) throw DomainError("n_steps must be at least 2");
    SaddleCurve c;
    c.alpha = p.alpha;
    c.theta = theta;
    const double th = std::fabs(theta);
    Tracer tp(p, th, Branch::Plus), tm(p, th, Branch::Minus);
    c.r.push_back(0.0);
    c.v_plus.push_back(p.t0);
    c.v_minus.push_back(p.t0);
    // First sample linear in sqrt(r), the rest geometric.
    const double r1 = r_max * 1e-6;
    const double ratio = std::pow(r_max / r1, 1.0 / (n_steps - 1));
    double r = r1;
    cplx vp = tp.at_small(r), vm = tm.at_small(r);
    for (int k = 0; k < n_steps; ++k) {
        double target = k == n_steps - 1 ? r_max : r1 * std::pow(ratio, k);
        if (k > 0) {
            vp = tp.advance(r, vp, target);
            vm = tm.advance(r, vm, target);
        }
        r = target;
        c.r.push_back(r);
        c.v_plus.push_back(vp);
        c.v_minus.push_back(vm);
        if (vp.imag() < -1e-12 * std::abs(vp))
            throw NumericalError(ErrorKind::Continuation, "plus curve crossed the real axis", r);
    }
    if (theta < 0) {
        // v-_theta = conj(v+_{-theta}) and v+_theta = conj(v-_{-theta}).
        for (size_t k = 0; k < c.r.size(); ++k) {
            cplx a = std::conj(c.v_minus[k]), b = std::conj(c.v_plus[k]);
            c.v_plus[k] = a;
            c.v_minus[k] = b;
        }
    }
    return c;
}

double curve_growth_check(const SaddleCurve& c) {
    double A = 0;
    for (size_t k = 0; k < c.r.size(); ++k) {
        double need = std::max(std::abs(c.v_plus[k]), std::abs(c.v_minus[k])) - 2 * c.r[k];
        A = std::max(A, need);
    }
    return A;
}

double descent_theta(const StableParams& p, cplx z) {
    if (z.imag() < 0) return -descent_theta(p, std::conj(z));
    const double phi = std::arg(z);
    const double band = theta_band(p.alpha);
    double lo = std::max(band, 0.5 - phi / pi), hi = std::min(1.0, 1.5 - phi / pi);
    double t = 1 - phi / pi;
    if (!(t > lo) || t > hi) t = lo + 0.5 * (hi - lo);
    return t;
}

cplx contour_eval_G_scaled(const StableParams& p, cplx z, double theta, const QuadratureConfig& cfg) {
    cfg.validate();
    check_theta(p, theta);
    const cplx rot = std::polar(1.0, pi * theta);
    const double kappa = -std::real(z * rot);
    if (!(kappa > 0)) throw DomainError("contour representation needs Re(z e^{i pi theta}) < 0");
    if (theta < 0) return std::conj(contour_eval_G_scaled(p, std::conj(z), -theta, cfg));
    Tracer tp(p, theta, Branch::Plus), tm(p, theta, Branch::Minus);
    const double r_end = (60.0 + 2 * std::log1p(1 / kappa)) / kappa;
    const double s_end = std::sqrt(r_end);
    auto cp = dense_trace(tp, r_end), cm = dense_trace(tm, r_end);
    const cplx zr = z * rot;
    auto f = [&](double s) -> cplx {
        if (s <= 0) return 0.0;
        double r = s * s;
        cplx vp = solve_near(tp, cp, r), vm = solve_near(tm, cm, r);
        return std::exp(zr * r) * (vp - vm) * (2 * s);
    };
    std::vector<double> br;
    for (int j = -12; j <= 2; ++j) br.push_back(std::ldexp(1.0, j) / std::sqrt(kappa));
    auto q = integrate(f, 0.0, s_end, cfg, br);
    if (!q.converged)
        throw NumericalError(ErrorKind::NonConvergence, "contour quadrature did not converge", q.abs_error);
    return -(z * rot) / cplx(0, 2 * pi * p.beta) * q.value;
}

cplx contour_eval_G(const StableParams& p, cplx z, double theta, const QuadratureConfig& cfg) {
    return std::exp(-p.delta * z) * contour_eval_G_scaled(p, z, theta, cfg);
}

RoughBound rough_bound_scan(const StableParams& p, std::span<const cplx> zs, const QuadratureConfig& cfg) {
    if (zs.empty()) throw DomainError("sample set must be nonempty");
    std::vector<double> m(zs.size()), rho(zs.size());
    for (size_t i = 0; i < zs.size(); ++i) {
        cplx z = zs[i];
        rho[i] = std::abs(z);
        cplx v;
        if (z.imag() == 0.0 && z.real() > 0) {
            v = G_scaled_descent(p, z.real(), cfg).value;
        } else {
            auto q = z.imag() >= 0 ? G_complex_direct(p, z, cfg) : G_complex_direct(p, std::conj(z), cfg);
            if (q.converged && q.condition() <= 1e4) v = q.value * std::exp(p.delta * (z.imag() >= 0 ? z : std::conj(z)));
            else v = contour_eval_G_scaled(p, z, descent_theta(p, z), cfg);
        }
        m[i] = std::abs(v);
        if (!std::isfinite(m[i])) throw NumericalError(ErrorKind::Evaluation, "non-finite value in bound scan", rho[i]);
    }
    // Tightest relative envelope: over directions (A, B) = (cos phi, sin phi), scale so the
    // bound touches the data and minimise the largest overshoot ratio.
    auto fit = [&](double phi) {
        double A = std::cos(phi), B = std::sin(phi), lo = HUGE_VAL, hi = 0;
        for (size_t i = 0; i < m.size(); ++i) {
            double q = (A + B / rho[i]) / m[i];
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        return std::array<double, 3>{hi / lo, A / lo, B / lo};
    };
    double lo = 0, hi = pi / 2;
    for (int it = 0; it < 200; ++it) {
        double a1 = lo + (hi - lo) / 3, a2 = hi - (hi - lo) / 3;
        if (fit(a1)[0] <= fit(a2)[0]) hi = a2;
        else lo = a1;
    }
    auto best = fit(0.5 * (lo + hi));
    RoughBound rb;
    rb.A = best[1];
    rb.B = best[2];
    return rb;
}

}  // namespace stablehcm
