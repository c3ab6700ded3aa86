#include "stablehcm/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stablehcm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();

cplx expm1c(cplx z) {
    const double x = z.real(), y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2 * s * s, std::exp(x) * std::sin(y)};
}

// e^{-2 i pi n alpha} with the phase reduced first to keep it exact for large n.
cplx rotation(double n_alpha, Side side) {
    double f = std::fmod(n_alpha, 1.0);
    double ang = -2 * pi * f;
    return std::polar(1.0, side == Side::Upper ? ang : -ang);
}

BoundarySample finish(const StableParams& p, double r, cplx scaled, double abs_err, Side side) {
    BoundarySample s;
    s.r = r;
    s.scaled = scaled;
    const double m = std::abs(scaled);
    s.log_modulus = std::log(m) + p.delta * r;
    double th = -std::arg(scaled) / pi;
    if (side == Side::Lower) th = -th;
    s.theta = th;
    s.theta_noise = m > 0 ? abs_err / (pi * m) : 1.0;
    if (!(m > 0) || !std::isfinite(m))
        throw NumericalError(ErrorKind::Evaluation, "boundary value is not finite", r);
    const double im = side == Side::Upper ? scaled.imag() : -scaled.imag();
    if (!(im < 0))
        throw NumericalError(ErrorKind::Evaluation, "boundary value has nonnegative imaginary part", r);
    return s;
}

}  // namespace

BoundarySample boundary_value_series(const StableParams& p, double r, Side side) {
    if (!(r > 0)) throw DomainError("r must be positive");
    const double a = p.alpha;
    const double lz = (1 - a) * std::log(r);
    const double shift = -a * std::log(r) - p.delta * r;
    cplx sum = 0.0;
    double absum = 0.0, maxmag = 0.0;
    int small = 0;
    for (long n = 1; n < 100000000; ++n) {
        const double lm = (n - 1) * lz + std::lgamma(1 + n * a) - std::lgamma(n + 1.0) + shift;
        const double mag = lm < -745 ? 0.0 : std::exp(lm);
        const cplx term = mag * (1.0 - rotation(n * a, side));
        sum += term;
        absum += 2 * mag;
        maxmag = std::max(maxmag, mag);
        // Stop on the modulus without (1 - w^n), which can vanish for some n.
        if (mag < 1e-18 * maxmag) {
            if (++small > 5) break;
        } else {
            small = 0;
        }
    }
    const cplx pref = side == Side::Upper ? 1.0 / cplx(0, 2 * pi * p.beta) : 1.0 / cplx(0, -2 * pi * p.beta);
    const double pm = std::abs(pref);
    return finish(p, r, sum * pref, (absum * pm) * 8 * eps, side);
}

BoundarySample boundary_value(const StableParams& p, double r, const QuadratureConfig& cfg, Side side) {
    cfg.validate();
    if (!p.one_sided_law()) throw DomainError("boundary values are defined for gamma = alpha");
    if (!(r > 0)) throw DomainError("r must be positive");
    if (r < 1e-2) return boundary_value_series(p, r, side);
    const double a = p.alpha, d = p.delta, t0 = p.t0;
    const cplx wm1 = rotation(a, side) - 1.0;
    auto f = [&](double t) -> cplx {
        if (t <= 0) return 0.0;
        const double ta = std::pow(t, a);
        const double e = r * (t - ta + d);
        if (e > 745) return 0.0;
        return -std::exp(-e) * expm1c(r * ta * wm1);
    };
    const double sigma = std::sqrt(t0 / (r * (1 - a)));
    std::vector<double> br;
    for (int j = 0; j <= 6; ++j) {
        double w = std::ldexp(sigma, j);
        br.push_back(t0 + w);
        if (t0 - w > 0) br.push_back(t0 - w);
    }
    br.push_back(t0);
    for (int j = 1; j <= 30; ++j) br.push_back(t0 * std::ldexp(1.0, -j));
    const double h0 = t0 + std::max(64 * sigma, 1.0 / r);
    auto q = integrate_to_infinity(f, 0.0, h0, cfg, br);
    if (!q.converged)
        throw NumericalError(ErrorKind::NonConvergence, "boundary quadrature did not converge", q.abs_error);
    const cplx pref = side == Side::Upper ? 1.0 / cplx(0, 2 * pi * p.beta) : 1.0 / cplx(0, -2 * pi * p.beta);
    return finish(p, r, q.value * pref, q.abs_error * std::abs(pref), side);
}

double ThetaFunction::operator()(double t) const {
    if (nodes.empty() || t >= nodes.back()) return right_limit;
    if (t <= nodes.front()) {
        if (t <= 0) return left_limit;
        double u = std::pow(t, left_power);
        return left_limit + left_coeffs[0] * u + left_coeffs[1] * u * u;
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    size_t k = static_cast<size_t>(it - nodes.begin()) - 1;
    double w = (t - nodes[k]) / (nodes[k + 1] - nodes[k]);
    return theta[k] + w * (theta[k + 1] - theta[k]);
}

namespace {

void series_left_coeffs(const StableParams& p, ThetaFunction& th) {
    const double a = p.alpha;
    auto e = [&](int n) {
        double lm = std::lgamma(1 + (n + 1) * a) - std::lgamma(n + 2.0);
        return std::exp(lm) * (1.0 - rotation((n + 1) * a, Side::Upper));
    };
    cplx e0 = e(0), r1 = e(1) / e0, r2 = e(2) / e0;
    th.left_power = 1 - a;
    th.left_coeffs = {-std::imag(r1) / pi, -std::imag(r2 - 0.5 * r1 * r1) / pi};
}

}  // namespace

ThetaFunction theta_extract(const StableParams& p, double r_min, double r_max, const QuadratureConfig& cfg,
                            const ThetaOptions& opt) {
    cfg.validate();
    if (!(r_min > 0 && r_min < r_max)) throw DomainError("need 0 < r_min < r_max");
    if (opt.n < 2) throw DomainError("need at least two nodes");
    std::vector<BoundarySample> s;
    s.reserve(opt.n);
    const double lr = std::log(r_max / r_min);
    for (int k = 0; k < opt.n; ++k) {
        double r = k == opt.n - 1 ? r_max : r_min * std::exp(lr * k / (opt.n - 1));
        s.push_back(boundary_value(p, r, cfg));
    }
    // Refine by bisection in log r wherever the jump guard or the linear
    // interpolation check fails.
    std::vector<BoundarySample> out{s.front()};
    int budget = opt.max_nodes;
    auto refine = [&](auto&& self, const BoundarySample& A, const BoundarySample& B, int depth) -> void {
        const double jump = std::fabs(B.theta - A.theta);
        const double rm = std::sqrt(A.r * B.r);
        if (depth > 40 || --budget < 0 || rm <= A.r || rm >= B.r) {
            if (jump >= 0.1)
                throw NumericalError(ErrorKind::Refinement,
                                     "theta continuity guard failed on [" + std::to_string(A.r) + ", " +
                                         std::to_string(B.r) + "]",
                                     jump);
            out.push_back(B);
            return;
        }
        BoundarySample M = boundary_value(p, rm, cfg);
        const double w = (rm - A.r) / (B.r - A.r);
        const double lin = A.theta + w * (B.theta - A.theta);
        const double floor = std::max(opt.interp_tol, 10 * (A.theta_noise + B.theta_noise + M.theta_noise));
        if (jump >= 0.1 || std::fabs(M.theta - lin) > floor) {
            self(self, A, M, depth + 1);
            self(self, M, B, depth + 1);
        } else {
            out.push_back(M);
            out.push_back(B);
        }
    };
    for (size_t k = 0; k + 1 < s.size(); ++k) refine(refine, s[k], s[k + 1], 0);

    ThetaFunction th;
    th.alpha = p.alpha;
    th.left_limit = p.alpha;
    th.right_limit = 0.5;
    // Anchor at the node nearest r = 1 and unwrap outward by continuity.
    std::vector<double> raw;
    for (auto& b : out) raw.push_back(b.theta);
    size_t anchor = 0;
    for (size_t k = 0; k < out.size(); ++k)
        if (std::fabs(std::log(out[k].r)) < std::fabs(std::log(out[anchor].r))) anchor = k;
    for (size_t k = anchor + 1; k < raw.size(); ++k) raw[k] -= 2 * std::round((raw[k] - raw[k - 1]) / 2);
    for (size_t k = anchor; k-- > 0;) raw[k] -= 2 * std::round((raw[k] - raw[k + 1]) / 2);
    for (size_t k = 0; k < out.size(); ++k) {
        th.nodes.push_back(out[k].r);
        th.theta.push_back(raw[k]);
        th.scaled_modulus.push_back(std::abs(out[k].scaled));
        th.noise.push_back(out[k].theta_noise);
    }
    series_left_coeffs(p, th);
    // Richardson limits: error O(r^(1-alpha)) at 0 and O(1/r) at infinity.
    {
        double q1 = std::pow(th.nodes[0], 1 - p.alpha), q2 = std::pow(th.nodes[1], 1 - p.alpha);
        th.extrapolated_left = (th.theta[0] * q2 - th.theta[1] * q1) / (q2 - q1);
        size_t n = th.nodes.size();
        double r1 = th.nodes[n - 2], r2 = th.nodes[n - 1];
        th.extrapolated_right = (th.theta[n - 1] * r2 - th.theta[n - 2] * r1) / (r2 - r1);
    }
    return th;
}

double c0_constant(double alpha) { return (1 - alpha) / std::tgamma(1 - alpha); }

double c_inf_constant(double alpha) {
    const double beta = alpha / (1 - alpha);
    return std::pow(2 * pi * beta, -0.5) * std::pow(alpha, beta / 2);
}

AsymptoticConstants asymptotic_constants(const StableParams& p, const QuadratureConfig& cfg) {
    cfg.validate();
    AsymptoticConstants c;
    c.delta = p.delta;
    c.t0 = p.t0;
    c.c0 = c0_constant(p.alpha);
    c.c_inf = c_inf_constant(p.alpha);
    c.G_at_1 = eval_G_real(p, 1.0, cfg);
    {
        // r^alpha |G(-r+)| = |E(r^(1-alpha))|, linear in r^(1-alpha) near 0.
        const double r1 = 1e-8, r2 = 2e-8;
        auto m = [&](double r) {
            auto b = boundary_value(p, r, cfg);
            return std::exp(p.alpha * std::log(r) + b.log_modulus);
        };
        double q1 = std::pow(r1, 1 - p.alpha), q2 = std::pow(r2, 1 - p.alpha);
        c.c0_fitted = (m(r1) * q2 - m(r2) * q1) / (q2 - q1);
    }
    {
        const double r1 = 2000 / std::max(p.delta, 0.05), r2 = 2 * r1;
        auto m = [&](double r) {
            auto b = boundary_value(p, r, cfg);
            return std::exp(0.5 * std::log(r) + b.log_modulus - p.delta * r);
        };
        c.c_inf_fitted = (m(r2) * r2 - m(r1) * r1) / (r2 - r1);
    }
    if (std::fabs(c.c0_fitted / c.c0 - 1) > 0.01)
        throw NumericalError(ErrorKind::ConstantResolution, "c0 disagrees with the boundary-value limit",
                             c.c0_fitted);
    return c;
}

std::vector<WeightedRow> weighted_parts(const StableParams& p, std::span<const double> r_grid,
                                        const QuadratureConfig& cfg) {
    if (r_grid.empty()) throw DomainError("r grid must be nonempty");
    for (size_t k = 1; k < r_grid.size(); ++k)
        if (!(r_grid[k] > r_grid[k - 1])) throw DomainError("r grid must be increasing");
    std::vector<WeightedRow> rows;
    for (double r : r_grid) {
        auto b = boundary_value(p, r, cfg);
        cplx v = b.scaled * std::exp(p.delta * r + p.alpha * std::log(r));
        rows.push_back({r, v.real(), v.imag()});
    }
    return rows;
}

double cross_check_identity(const StableParams& p, double r, const QuadratureConfig& cfg) {
    if (!(r > 0)) throw DomainError("r must be positive");
    auto b = boundary_value(p, r, cfg);
    const double lhs = std::real(b.scaled * std::exp(p.delta * r + p.alpha * std::log(r)));
    const double x = std::pow(r, -1 / p.beta);
    const double g = eval_density(StableParams::make(p.alpha, 1 - 2 * p.alpha), x, cfg);
    const double rhs = std::pow(x, p.alpha + 1) * g / (2 * p.beta);
    return lhs - rhs;
}

}  // namespace stablehcm
