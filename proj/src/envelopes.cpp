#include "stablehcm/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

namespace stablehcm {

namespace {

constexpr double outward = 1e-9;

struct Extremes {
    double lo, hi;
};

// Grid scan of h on a log grid over [a, b] followed by golden-section polish of
// interior extrema; `ends` are extra candidate values (limits, endpoint values).
Extremes scan(const std::function<double(double)>& h, double a, double b, int n, std::initializer_list<double> ends) {
    std::vector<double> xs(n), hs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
        hs[i] = h(xs[i]);
    }
    Extremes e{*std::min_element(hs.begin(), hs.end()), *std::max_element(hs.begin(), hs.end())};
    for (double v : ends) e = {std::min(e.lo, v), std::max(e.hi, v)};
    auto polish = [&](int i, double sign) {
        if (i <= 0 || i >= n - 1) return;
        double l = std::log(xs[i - 1]), r = std::log(xs[i + 1]);
        const double g = 0.5 * (std::sqrt(5.0) - 1);
        auto f = [&](double s) { return sign * h(std::exp(s)); };
        double c = r - g * (r - l), d = l + g * (r - l);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < 40; ++it) {
            if (fc > fd) {
                r = d;
                d = c;
                fd = fc;
                c = r - g * (r - l);
                fc = f(c);
            } else {
                l = c;
                c = d;
                fc = fd;
                d = l + g * (r - l);
                fd = f(d);
            }
        }
        double best = sign * std::max(fc, fd);
        if (sign > 0) e.hi = std::max(e.hi, best);
        else e.lo = std::min(e.lo, best);
    };
    polish(static_cast<int>(std::max_element(hs.begin(), hs.end()) - hs.begin()), 1.0);
    polish(static_cast<int>(std::min_element(hs.begin(), hs.end()) - hs.begin()), -1.0);
    return e;
}

EnvelopeConstants constants_at(const StableParams& p, int n, const AsymptoticConstants& ac, const QuadratureConfig& cfg) {
    const double a = p.alpha, d = p.delta;
    EnvelopeConstants c;
    c.alpha = a;
    c.delta = d;
    c.c0 = ac.c0;
    c.c_inf = ac.c_inf;
    c.G_at_1 = ac.G_at_1;
    c.x_max = 50 / d;
    c.grid_density = n;
    auto h1 = [&](double x) { return std::pow(x, a) * std::exp(d * x) * eval_G_real(p, x, cfg); };
    auto h2 = [&](double x) { return std::sqrt(x) * G_scaled_descent(p, x, cfg).value; };
    const double at1 = std::exp(d) * ac.G_at_1;
    auto A = scan(h1, 1e-10, 1.0, n, {ac.c0, at1});
    auto B = scan(h2, 1.0, c.x_max, n, {ac.c_inf, at1});
    c.A_minus = A.lo;
    c.A_plus = A.hi;
    c.B_minus = B.lo;
    c.B_plus = B.hi;
    return c;
}

double rel_diff(double u, double v) { return std::fabs(u - v) / std::max(std::fabs(u), std::fabs(v)); }

// G(x) e^(delta x) times the matching power, i.e. G / (f1 or f2) without exponentials.
double scaled_ratio(const StableParams& p, double x, const QuadratureConfig& cfg) {
    double pw = x <= 1 ? std::pow(x, p.alpha) : std::sqrt(x);
    if (std::pow(x, 1 - p.alpha) < 1e-3) return pw * std::exp(p.delta * x) * eval_G_real(p, x, cfg);
    return pw * G_scaled_descent(p, x, cfg).value;
}

EnvelopeReport check_bounds(const StableParams& p, std::span<const double> xs, double a_lo, double a_hi, double b_lo,
                            double b_hi, const QuadratureConfig& cfg, double tol) {
    if (xs.empty()) throw DomainError("x grid must be nonempty");
    EnvelopeReport rep;
    rep.tolerance = tol;
    rep.lower_slack = rep.upper_slack = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        if (!(x > 0)) throw DomainError("x grid must be positive");
        // Dividing through by f1 or f2 keeps the comparison free of underflow.
        const double h = scaled_ratio(p, x, cfg);
        const double lo = x <= 1 ? a_lo : b_lo, hi = x <= 1 ? a_hi : b_hi;
        double sl = (h - lo) / h, su = (hi - h) / h;
        if (sl < rep.lower_slack) {
            rep.lower_slack = sl;
            rep.lower_x = x;
        }
        if (su < rep.upper_slack) {
            rep.upper_slack = su;
            rep.upper_x = x;
        }
    }
    rep.ok = rep.lower_slack >= -tol && rep.upper_slack >= -tol;
    return rep;
}

}  // namespace

void EnvelopeConstants::validate() const {
    for (double v : {A_plus, A_minus, B_plus, B_minus, c0, c_inf, G_at_1, delta})
        if (!(v > 0) || !std::isfinite(v)) throw DomainError("envelope constants must be positive and finite");
    if (!(A_minus <= A_plus && B_minus <= B_plus)) throw DomainError("envelope constants are out of order");
}

double envelope_f1(double alpha, double delta, double x) {
    return x > 0 && x <= 1 ? std::pow(x, -alpha) * std::exp(-delta * x) : 0.0;
}

double envelope_f2(double delta, double x) { return x > 1 ? std::exp(-delta * x) / std::sqrt(x) : 0.0; }

EnvelopeConstants envelope_constants(const StableParams& p, int grid_density, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!p.one_sided_law()) throw DomainError("envelopes need gamma = alpha");
    if (grid_density < 8) throw DomainError("grid_density must be at least 8");
    const auto ac = asymptotic_constants(p, cfg);
    auto c1 = constants_at(p, grid_density, ac, cfg);
    auto c2 = constants_at(p, 2 * grid_density, ac, cfg);
    double worst = std::max({rel_diff(c1.A_plus, c2.A_plus), rel_diff(c1.A_minus, c2.A_minus),
                             rel_diff(c1.B_plus, c2.B_plus), rel_diff(c1.B_minus, c2.B_minus)});
    if (worst > 5e-3) throw NumericalError(ErrorKind::Refinement, "envelope constants unstable under grid doubling", worst);
    c1.A_plus = std::max(c1.A_plus, c2.A_plus) * (1 + outward);
    c1.B_plus = std::max(c1.B_plus, c2.B_plus) * (1 + outward);
    c1.A_minus = std::min(c1.A_minus, c2.A_minus) * (1 - outward);
    c1.B_minus = std::min(c1.B_minus, c2.B_minus) * (1 - outward);
    c1.validate();
    return c1;
}

EnvelopeReport check_envelope(const StableParams& p, const EnvelopeConstants& c, std::span<const double> xs,
                              const QuadratureConfig& cfg) {
    c.validate();
    if (std::fabs(c.alpha - p.alpha) > 1e-12) throw DomainError("constants were computed for another alpha");
    return check_bounds(p, xs, c.A_minus, c.A_plus, c.B_minus, c.B_plus, cfg, 1e-9);
}

EnvelopeReport sharp_envelope_check(const StableParams& p, std::span<const double> xs, const QuadratureConfig& cfg) {
    if (!p.one_sided_law()) throw DomainError("envelopes need gamma = alpha");
    if (p.alpha < 1.0 / 3) throw DomainError("the sharp envelope needs alpha >= 1/3");
    const double c0 = c0_constant(p.alpha), ci = c_inf_constant(p.alpha);
    const double K = std::exp(p.delta) * eval_G_real(p, 1.0, cfg);
    return check_bounds(p, xs, std::min(K, c0), std::max(K, c0), std::min(K, ci), std::max(K, ci), cfg, 1e-9);
}

double envelope_mass(const EnvelopeConstants& c) {
    c.validate();
    using boost::math::gamma_p;
    using boost::math::gamma_q;
    const double a = c.alpha, d = c.delta;
    double m1 = c.A_plus * std::pow(d, a - 1) * std::tgamma(1 - a) * gamma_p(1 - a, d);
    double m2 = c.B_plus * std::sqrt(std::numbers::pi / d) * gamma_q(0.5, d);
    return m1 + m2;
}

double counter_uniform(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

SampleSet sample_inverse_beta_power(const StableParams& p, std::size_t n, std::uint64_t seed,
                                    const EnvelopeConstants& c, const QuadratureConfig& cfg) {
    c.validate();
    if (std::fabs(c.alpha - p.alpha) > 1e-12) throw DomainError("constants were computed for another alpha");
    using boost::math::gamma_p;
    using boost::math::gamma_p_inv;
    using boost::math::gamma_q;
    using boost::math::gamma_q_inv;
    const double a = p.alpha, d = p.delta;
    const double m1 = c.A_plus * std::pow(d, a - 1) * std::tgamma(1 - a) * gamma_p(1 - a, d);
    const double m2 = c.B_plus * std::sqrt(std::numbers::pi / d) * gamma_q(0.5, d);
    const double mass = m1 + m2, w1 = m1 / mass;
    SampleSet out;
    out.expected_rate = 1 / mass;
    if (out.expected_rate < 0.01)
        throw NumericalError(ErrorKind::EnvelopeQuality, "envelope acceptance rate below 1%", out.expected_rate);
    const double P1 = gamma_p(1 - a, d), Q2 = gamma_q(0.5, d);
    out.x.reserve(n);
    std::uint64_t k = 0;
    while (out.x.size() < n) {
        const double u0 = counter_uniform(seed, 3 * k), u1 = counter_uniform(seed, 3 * k + 1),
                     u2 = counter_uniform(seed, 3 * k + 2);
        ++k;
        const bool first = u0 < w1;
        double x = first ? gamma_p_inv(1 - a, u1 * P1) / d : gamma_q_inv(0.5, u1 * Q2) / d;
        if (first) x = std::min(x, 1.0);
        else if (x <= 1) continue;
        const double top = first ? c.A_plus : c.B_plus, bottom = first ? c.A_minus : c.B_minus;
        const double t = u2 * top;
        if (t <= bottom || t <= scaled_ratio(p, x, cfg)) out.x.push_back(x);
        if (k == 20000 && static_cast<double>(out.x.size()) / k < 0.01)
            throw NumericalError(ErrorKind::EnvelopeQuality, "empirical acceptance rate below 1%",
                                 static_cast<double>(out.x.size()) / k);
    }
    out.candidates = k;
    out.acceptance_rate = static_cast<double>(n) / static_cast<double>(k);
    return out;
}

double ks_distance(std::vector<double> s, const std::function<double(double)>& cdf) {
    if (s.empty()) throw DomainError("sample must be nonempty");
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double dmax = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        double F = cdf(s[i]);
        dmax = std::max({dmax, F - i / n, (i + 1) / n - F});
    }
    return dmax;
}

}  // namespace stablehcm
