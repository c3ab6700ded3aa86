#include "stablehcm/hcm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stablehcm {

namespace {

constexpr double pi = std::numbers::pi;

bool on_cut(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0; }

cplx log1p_c(cplx w) {
    double x = w.real(), y = w.imag();
    return {0.5 * std::log1p(2 * x + x * x + y * y), std::atan2(y, 1 + x)};
}

// log((z+b)/(z+a)) for 0 <= a < b, continuous from the side of the cut selected by sign(Im z).
cplx log_ratio(cplx z, double a, double b) {
    cplx za = z + a;
    if (!on_cut(z)) {
        cplx w = (b - a) / za;
        if (std::abs(w) < 0.5) return log1p_c(w);
        return std::log(z + b) - std::log(za);
    }
    const double ra = za.real(), rb = ra + (b - a);
    if (ra > 0) return std::log1p((b - a) / ra);
    if (rb < 0) return std::log1p((b - a) / ra);
    // Straddling endpoint: log(0) is dropped in both neighbouring cells.
    cplx lb = rb == 0 ? cplx(0) : std::log(cplx(rb, z.imag()));
    cplx la = ra == 0 ? cplx(0) : std::log(cplx(ra, z.imag()));
    return lb - la;
}

// int_a^b (1/(z+t) - 1/(1+t)) (th_a + q (t - a)) dt, q the slope.
cplx linear_cell(cplx z, double a, double b, double th_a, double th_b) {
    const double q = (th_b - th_a) / (b - a);
    cplx at_mz = th_a + q * (-z - a);      // theta extended to t = -z
    double at_m1 = th_a + q * (-1.0 - a);  // and to t = -1
    return at_mz * log_ratio(z, a, b) - at_m1 * std::log1p((b - a) / (1 + a));
}

double guard_scale(double v) { return std::max(1.0, std::fabs(v)); }

template <class F>
cplx integrate_c(F&& f, double a, double b, const QuadratureConfig& cfg, std::span<const double> br = {}) {
    auto q = integrate(f, a, b, cfg, br);
    if (!q.converged)
        throw NumericalError(ErrorKind::NonConvergence, "Stieltjes kernel quadrature did not converge", q.abs_error);
    return q.value;
}

cplx function_stieltjes(const ThetaRep& th, cplx z, const QuadratureConfig& cfg) {
    if (on_cut(z)) throw DomainError("closed-form theta is evaluated off the cut only");
    // t = v^2 on [0, 1] and t = 1/v^2 on [1, inf); the kernel is written
    // without cancellation as (1 - z) / ((z + t)(1 + t)).
    auto lo = [&](double v) -> cplx {
        double t = v * v;
        return (1.0 - z) / ((z + t) * (1.0 + t)) * th.fn(t) * (2 * v);
    };
    auto hi = [&](double v) -> cplx {
        if (v <= 0) return 0.0;
        double u = v * v;
        return (1.0 - z) / ((z * u + 1.0) * (u + 1.0)) * th.fn(1.0 / u) * (2 * v);
    };
    std::vector<double> br;
    const double r = std::sqrt(std::abs(z));
    br.push_back(r < 1 ? r : 1 / r);
    return integrate_c(lo, 0.0, 1.0, cfg, br) + integrate_c(hi, 0.0, 1.0, cfg, br);
}

cplx table_stieltjes(const ThetaFunction& tf, cplx z, const QuadratureConfig& cfg) {
    const auto& n = tf.nodes;
    if (n.empty()) return -tf.right_limit * std::log(z);
    if (!std::isfinite(tf.left_limit) || !std::isfinite(tf.right_limit))
        throw NumericalError(ErrorKind::Representation, "theta table needs finite declared limits", 0);
    cplx s = 0.0;
    const double a0 = n.front();
    // Head: constant left limit in closed form.
    {
        cplx lz = on_cut(z) ? std::log(z + a0) - std::log(z)
                            : (std::abs(a0 / z) < 0.5 ? log1p_c(a0 / z) : std::log(z + a0) - std::log(z));
        s += tf.left_limit * (lz - std::log1p(a0));
    }
    // Head correction from the fractional-power expansion.
    const double r = std::abs(z);
    if ((tf.left_coeffs[0] != 0 || tf.left_coeffs[1] != 0) && !(on_cut(z) && r < 2 * a0)) {
        const double p = tf.left_power;
        auto f = [&](double t) -> cplx {
            double u = std::pow(t, p);
            return (1.0 / (z + t) - 1.0 / (1.0 + t)) * (tf.left_coeffs[0] * u + tf.left_coeffs[1] * u * u);
        };
        s += integrate_c(f, 0.0, a0, cfg);
    }
    // Cells: exact for piecewise-linear theta.
    for (size_t k = 0; k + 1 < n.size(); ++k) s += linear_cell(z, n[k], n[k + 1], tf.theta[k], tf.theta[k + 1]);
    // Tail: constant right limit.
    const double b = n.back();
    cplx lt;
    cplx zb = z + b;
    if (!on_cut(z) || zb.real() > 0) {
        cplx w = (z - 1.0) / (1.0 + b);
        lt = std::abs(w) < 0.5 ? log1p_c(w) : std::log(zb) - std::log1p(b);
    } else {
        lt = (zb.real() == 0 ? cplx(0) : std::log(cplx(zb.real(), z.imag()))) - std::log1p(b);
    }
    s -= tf.right_limit * lt;
    return s;
}

// int_0^inf over y = e^s, s >= 0 (dir = +1) or s <= 0 (dir = -1); the tail
// beyond the last panel is summed geometrically from the observed decay.
QuadResult<double> half_line(const std::function<double(double)>& f, int dir, const QuadratureConfig& cfg,
                             const char* tail_name) {
    auto g = [&](double s) {
        double y = std::exp(dir * s);
        double v = f(y) * y;
        if (!std::isfinite(v))
            throw NumericalError(ErrorKind::Divergence, std::string("integrand not finite near ") + tail_name, y);
        return v;
    };
    QuadResult<double> out;
    double lo = 0, h = 1;
    double prev = -1, last = -1;
    int quiet = 0;
    for (int k = 0; k < 22; ++k) {
        auto q = integrate(g, lo, lo + h, cfg);
        out.value += q.value;
        out.abs_error += q.abs_error;
        out.l1 += q.l1;
        out.subdivisions += q.subdivisions;
        prev = last;
        last = q.l1;
        if (q.l1 == 0.0 || q.l1 <= cfg.truncation_tail_tol * std::max(std::fabs(out.value), cfg.abs_tol)) {
            if (++quiet >= 2) return out;
        } else {
            quiet = 0;
        }
        if (h >= 32 && prev > 0 && last >= prev && quiet == 0) break;
        lo += h;
        if (h < 32) h *= 2;
        if (lo + h > 700) break;
    }
    if (prev > 0 && h >= 32) {
        double rho = last / prev;
        if (rho < 0.9) {
            double tail = last * rho / (1 - rho);
            out.value += std::copysign(tail, out.value);
            out.abs_error += tail;
            out.converged = true;
            return out;
        }
    }
    throw NumericalError(ErrorKind::Divergence, std::string("integral diverges at ") + tail_name, last);
}

double log_line_integral(const std::function<double(double)>& f, const QuadratureConfig& cfg) {
    auto hi = half_line(f, +1, cfg, "infinity");
    auto lo = half_line(f, -1, cfg, "0");
    return hi.value + lo.value;
}

}  // namespace

// ---- ThetaRep --------------------------------------------------------------

ThetaRep ThetaRep::from_table(ThetaFunction t) {
    ThetaRep r;
    r.kind = Kind::Table;
    r.table = std::move(t);
    return r;
}

ThetaRep ThetaRep::make_constant(double c) {
    ThetaRep r;
    r.kind = Kind::Constant;
    r.constant = c;
    return r;
}

ThetaRep ThetaRep::make_step(double at, double height) {
    if (!(at >= 0)) throw DomainError("step location must be nonnegative");
    ThetaRep r;
    r.kind = Kind::Step;
    r.step_at = at;
    r.step_height = height;
    return r;
}

ThetaRep ThetaRep::from_function(std::function<double(double)> f, double left, double right) {
    if (!f) throw DomainError("theta function is empty");
    ThetaRep r;
    r.kind = Kind::Function;
    r.fn = std::move(f);
    r.fn_left = left;
    r.fn_right = right;
    return r;
}

double ThetaRep::operator()(double t) const {
    switch (kind) {
        case Kind::Table: return table(t);
        case Kind::Constant: return constant;
        case Kind::Step: return t >= step_at ? step_height : 0.0;
        case Kind::Function: return fn(t);
    }
    return 0.0;
}

double ThetaRep::left_limit() const {
    switch (kind) {
        case Kind::Table: return table.left_limit;
        case Kind::Constant: return constant;
        case Kind::Step: return step_at > 0 ? 0.0 : step_height;
        case Kind::Function: return fn_left;
    }
    return 0.0;
}

double ThetaRep::right_limit() const {
    switch (kind) {
        case Kind::Table: return table.right_limit;
        case Kind::Constant: return constant;
        case Kind::Step: return step_height;
        case Kind::Function: return fn_right;
    }
    return 0.0;
}

namespace {

template <class Cmp>
bool monotone(const ThetaRep& th, Cmp ok) {
    switch (th.kind) {
        case ThetaRep::Kind::Constant: return true;
        case ThetaRep::Kind::Step: return ok(0.0, th.step_height, 0.0);
        case ThetaRep::Kind::Table: {
            const auto& t = th.table;
            if (t.nodes.empty()) return ok(t.left_limit, t.right_limit, 0.0);
            auto tol = [&](size_t k) { return k < t.noise.size() ? 10 * t.noise[k] : 0.0; };
            if (!ok(th(0.5 * t.nodes.front()), t.theta.front(), tol(0))) return false;
            for (size_t k = 0; k + 1 < t.theta.size(); ++k)
                if (!ok(t.theta[k], t.theta[k + 1], tol(k) + tol(k + 1))) return false;
            return ok(t.theta.back(), t.right_limit, tol(t.theta.size() - 1));
        }
        case ThetaRep::Kind::Function: {
            auto grid = geometric_grid(1e-6, 1e6, 1.05);
            double prev = th.fn_left;
            for (double t : grid) {
                double v = th.fn(t);
                if (!ok(prev, v, 1e-12 * guard_scale(v))) return false;
                prev = v;
            }
            return ok(prev, th.fn_right, 1e-12 * guard_scale(prev));
        }
    }
    return false;
}

}  // namespace

bool ThetaRep::nondecreasing() const {
    return monotone(*this, [](double a, double b, double tol) { return b >= a - tol; });
}

bool ThetaRep::nonincreasing() const {
    return monotone(*this, [](double a, double b, double tol) { return b <= a + tol; });
}

void HcmRepresentation::check_integrable() const {
    if (!(c > 0) || !(a >= 0) || !(b >= 0) || !std::isfinite(c) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("need c > 0 and a, b >= 0");
    auto bad = [](const char* what) { return NumericalError(ErrorKind::Representation, what, 0); };
    switch (theta.kind) {
        case ThetaRep::Kind::Constant:
            if (!std::isfinite(theta.constant)) throw bad("theta constant is not finite");
            return;
        case ThetaRep::Kind::Step:
            if (!std::isfinite(theta.step_height)) throw bad("step height is not finite");
            return;
        case ThetaRep::Kind::Table:
            if (!std::isfinite(theta.table.left_limit) || !std::isfinite(theta.table.right_limit))
                throw bad("theta table needs finite declared limits");
            if (theta.table.theta.size() != theta.table.nodes.size()) throw bad("theta table is ragged");
            for (double v : theta.table.theta)
                if (!std::isfinite(v)) throw bad("theta table holds non-finite values");
            return;
        case ThetaRep::Kind::Function: {
            QuadratureConfig cfg;
            cfg.rel_tol = 1e-8;
            auto lo = [&](double t) { return std::fabs(theta.fn(t)); };
            auto hi = [&](double u) { return u <= 0 ? 0.0 : std::fabs(theta.fn(1.0 / u)); };
            auto q1 = integrate(lo, 0.0, 1.0, cfg);
            auto q2 = integrate(hi, 0.0, 1.0, cfg);
            if (!q1.converged || !q2.converged || !std::isfinite(q1.value + q2.value))
                throw bad("int min(1, t^-2) |theta(t)| dt is not finite");
            return;
        }
    }
}

// ---- evaluation ------------------------------------------------------------

cplx stieltjes_log(const ThetaRep& th, cplx z, const QuadratureConfig& cfg) {
    cfg.validate();
    if (z == 0.0) throw DomainError("z must be nonzero");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("z must be finite");
    switch (th.kind) {
        case ThetaRep::Kind::Constant: return -th.constant * std::log(z);
        case ThetaRep::Kind::Step: {
            const double b0 = th.step_at;
            cplx zb = z + b0;
            cplx l = on_cut(z) && zb.real() <= 0 ? (zb.real() == 0 ? cplx(0) : std::log(cplx(zb.real(), z.imag())))
                                                  : std::log(zb);
            return th.step_height * (std::log1p(b0) - l);
        }
        case ThetaRep::Kind::Table: return table_stieltjes(th.table, z, cfg);
        case ThetaRep::Kind::Function: return function_stieltjes(th, z, cfg);
    }
    return 0.0;
}

cplx exp_stieltjes(const ThetaRep& th, cplx z, const QuadratureConfig& cfg) {
    return std::exp(stieltjes_log(th, z, cfg));
}

cplx eval_hcm(const HcmRepresentation& rep, cplx z, const QuadratureConfig& cfg) {
    rep.check_integrable();
    if (on_cut(z)) throw DomainError("z must lie off (-inf, 0]");
    return rep.c * std::exp(-rep.a * z - rep.b / z + stieltjes_log(rep.theta, z, cfg));
}

cplx reconstruct_G(const StableParams& p, const ThetaFunction& theta, cplx z, const QuadratureConfig& cfg,
                   double check_tol) {
    if (std::fabs(theta.alpha - p.alpha) > 1e-12) throw DomainError("theta was extracted for a different alpha");
    if (on_cut(z)) throw DomainError("z must lie off (-inf, 0]");
    const double g1 = eval_G_real(p, 1.0, cfg);
    cplx v = g1 * std::exp(-p.delta * (z - 1.0) + table_stieltjes(theta, z, cfg));
    if (check_tol > 0) {
        cplx ref = eval_G_complex(p, z, cfg);
        double err = std::abs(v - ref) / std::abs(ref);
        if (!(err <= 10 * check_tol))
            throw NumericalError(ErrorKind::RoundTrip, "reconstruction disagrees with the direct evaluation", err);
    }
    return v;
}

// ---- probes ----------------------------------------------------------------

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
    if (!(lo > 0 && hi > lo && ratio > 1)) throw DomainError("geometric grid needs 0 < lo < hi and ratio > 1");
    std::vector<double> g;
    int n = static_cast<int>(std::ceil(std::log(hi / lo) / std::log(ratio) - 1e-9));
    for (int k = 0; k <= n; ++k) g.push_back(k == n ? hi : lo * std::pow(ratio, k));
    return g;
}

CmProbeReport cm_probe_values(std::span<const double> xs, std::span<const double> fs, int max_order,
                              double rel_noise) {
    if (xs.size() != fs.size()) throw DomainError("grid and values differ in length");
    if (max_order < 0) throw DomainError("max_order must be nonnegative");
    if (!(rel_noise > 0)) throw DomainError("rel_noise must be positive");
    for (size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i + 1] > xs[i])) throw DomainError("probe grid must be strictly increasing");
    for (size_t i = 0; i < fs.size(); ++i)
        if (!std::isfinite(fs[i])) throw NumericalError(ErrorKind::Evaluation, "non-finite probe value", xs[i]);
    CmProbeReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    const int n_max = std::min<int>(max_order, static_cast<int>(xs.size()) - 1);
    rep.max_order_checked = std::max(n_max, 0);
    for (int n = 0; n <= n_max; ++n) {
        for (size_t i = 0; i + n < xs.size(); ++i) {
            // Divided difference as sum_j f_j w_j with compensated summation.
            double sum = 0, comp = 0, mag = 0;
            for (int j = 0; j <= n; ++j) {
                double w = 1.0;
                for (int k = 0; k <= n; ++k)
                    if (k != j) w /= xs[i + j] - xs[i + k];
                double term = fs[i + j] * w;
                mag += std::fabs(term);
                double t = sum + term;
                comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
                sum = t;
            }
            double slack = (n % 2 ? -1.0 : 1.0) * (sum + comp);
            double noise = rel_noise * mag + std::numeric_limits<double>::min();
            double m = slack / noise;
            rep.margin = std::min(rep.margin, m);
            if (m < -10 && !rep.first_violation) rep.first_violation = Violation{n, xs[i], 0.0, m};
        }
    }
    if (!std::isfinite(rep.margin)) rep.margin = 0;
    rep.pass = !rep.first_violation;
    rep.inconclusive = rep.pass && rep.margin < 0;
    return rep;
}

CmProbeReport cm_probe(const std::function<double(double)>& f, std::span<const double> grid, int max_order,
                       double rel_noise) {
    std::vector<double> fs(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) fs[i] = f(grid[i]);
    return cm_probe_values(grid, fs, max_order, rel_noise);
}

std::vector<double> default_v_grid(int n, double v_max) {
    if (n < 2 || !(v_max > 1)) throw DomainError("v grid needs n >= 2 and v_max > 1");
    std::vector<double> v(n);
    const double w_max = v_max + 1 / v_max;
    for (int i = 0; i < n; ++i) {
        double w = 2 + (w_max - 2) * i / (n - 1);
        v[i] = i == 0 ? 1.0 : 0.5 * (w + std::sqrt(w * w - 4));
    }
    v.back() = v_max;
    return v;
}

CmProbeReport hcm_probe(const std::function<double(double)>& f, const HcmProbeGrids& grids, int max_order,
                        double rel_noise) {
    if (grids.u.empty()) throw DomainError("u grid must be nonempty");
    std::vector<double> vs = grids.v.empty() ? default_v_grid() : grids.v;
    for (double v : vs)
        if (!(v >= 1)) throw DomainError("v grid values must be >= 1");
    std::vector<double> ws(vs.size());
    for (size_t j = 0; j < vs.size(); ++j) ws[j] = vs[j] + 1 / vs[j];
    std::optional<CmProbeReport> worst;
    for (double u : grids.u) {
        if (!(u > 0)) throw DomainError("u values must be positive");
        std::vector<double> phi(vs.size());
        for (size_t j = 0; j < vs.size(); ++j) phi[j] = f(u * vs[j]) * f(u / vs[j]);
        auto rep = cm_probe_values(ws, phi, max_order, 2 * rel_noise);
        if (rep.first_violation) rep.first_violation->u = u;
        bool take = !worst || rep.margin < worst->margin;
        if (take) {
            bool pass_all = !worst || worst->pass;
            worst = rep;
            worst->pass = rep.pass && pass_all;
        } else if (!rep.pass) {
            worst->pass = false;
        }
    }
    worst->inconclusive = worst->pass && worst->margin < 0;
    return *worst;
}

// ---- section-six operations -----------------------------------------------

Truncation truncate_theta(const HcmRepresentation& rep, double n, const QuadratureConfig& cfg) {
    if (!(n > 0)) throw DomainError("truncation level must be positive");
    if (!rep.theta.nondecreasing()) throw DomainError("truncation needs a nondecreasing theta");
    rep.check_integrable();
    Truncation out;
    out.rep = rep;
    auto clamp = [n](double v) { return std::clamp(v, -n, n); };
    const ThetaRep& th = rep.theta;
    ThetaRep& tr = out.rep.theta;
    switch (th.kind) {
        case ThetaRep::Kind::Constant: tr.constant = clamp(th.constant); break;
        case ThetaRep::Kind::Step: tr.step_height = clamp(th.step_height); break;
        case ThetaRep::Kind::Table:
            for (double& v : tr.table.theta) v = clamp(v);
            tr.table.left_limit = clamp(th.table.left_limit);
            tr.table.right_limit = clamp(th.table.right_limit);
            if (std::fabs(th.table.left_limit) > n) tr.table.left_coeffs = {0, 0};
            break;
        case ThetaRep::Kind::Function: {
            auto f = th.fn;
            tr.fn = [f, n](double t) { return std::clamp(f(t), -n, n); };
            tr.fn_left = clamp(th.fn_left);
            tr.fn_right = clamp(th.fn_right);
            break;
        }
    }
    // eps_n = int (theta - n)^+ t^-2 dt, eps_hat_n = int (-n - theta)^+ dt.
    const double L = th.left_limit(), R = th.right_limit();
    if (R < -n) throw NumericalError(ErrorKind::Divergence, "eps_hat_n diverges: theta stays below -n", R);
    if (L > n) throw NumericalError(ErrorKind::Divergence, "eps_n diverges: theta exceeds n near 0", L);
    std::vector<double> br;
    if (th.kind == ThetaRep::Kind::Step && th.step_at > 0) br.push_back(th.step_at);
    auto up_lo = [&](double t) { return t <= 0 ? 0.0 : std::max(th(t) - n, 0.0) / (t * t); };
    auto up_hi = [&](double u) { return u <= 0 ? std::max(R - n, 0.0) : std::max(th(1.0 / u) - n, 0.0); };
    auto dn_lo = [&](double t) { return std::max(-n - th(t), 0.0); };
    auto dn_hi = [&](double u) { return u <= 0 ? 0.0 : std::max(-n - th(1.0 / u), 0.0) / (u * u); };
    auto run = [&](auto&& f, std::vector<double> b) {
        std::vector<double> in;
        for (double x : b)
            if (x > 0 && x < 1) in.push_back(x);
        auto q = integrate(f, 0.0, 1.0, cfg, in);
        if (!q.converged || !std::isfinite(q.value))
            throw NumericalError(ErrorKind::NonConvergence, "truncation envelope quadrature failed", q.abs_error);
        return q.value;
    };
    std::vector<double> inv;
    for (double x : br) inv.push_back(1 / x);
    // theta <= n on (0, t*) for nondecreasing theta, so the t^-2 weight never blows up.
    out.eps_n = run(up_lo, br) + run(up_hi, inv);
    out.eps_hat_n = run(dn_lo, br) + (R < -n ? 0.0 : run(dn_hi, inv));
    return out;
}

double mult_convolve(const std::function<double(double)>& H, const std::function<double(double)>& g, double x,
                     const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(x > 0)) throw DomainError("x must be positive");
    return log_line_integral([&](double y) { return H(x * y) * g(y); }, cfg);
}

TiltedDensity tilt_density(const std::function<double(double)>& g, double beta_exp, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(beta_exp)) throw DomainError("beta_exp must be finite");
    double m = log_line_integral([&](double y) { return std::pow(y, beta_exp) * g(y); }, cfg);
    if (!(m > 0)) throw NumericalError(ErrorKind::Divergence, "tilted mass is not positive", m);
    TiltedDensity out;
    out.m_beta = m;
    out.density = [g, beta_exp, m](double x) { return x > 0 ? std::pow(x, beta_exp) * g(x) / m : 0.0; };
    return out;
}

cplx laplace_of_G(const StableParams& p, cplx z, const QuadratureConfig& cfg) {
    cfg.validate();
    const double rz = std::abs(z);
    if (!(rz > p.delta)) throw DomainError("laplace_of_G needs |z| > delta");
    if (!p.one_sided_law()) throw DomainError("laplace_of_G needs gamma = alpha");
    const double a = p.alpha;
    const double e = 1 / (1 - a);  // s = u^e removes the s^-alpha singularity at 0
    if (on_cut(z)) {
        const double r = -z.real();
        const bool upper = !std::signbit(z.imag());
        auto f = [&](double u) -> cplx {
            if (u <= 0) return 0.0;
            double s = std::pow(u, e);
            double damp = std::exp(-(r - p.delta) * s);
            if (damp == 0.0) return 0.0;
            auto b = boundary_value(p, s, cfg, Side::Upper);
            return damp * std::conj(b.scaled) * (e * s / u);
        };
        const double k = r - p.delta;
        auto q = integrate_to_infinity(f, 0.0, std::pow(1 / k, 1 - a), cfg);
        if (!q.converged) throw NumericalError(ErrorKind::NonConvergence, "boundary Laplace integral failed", q.abs_error);
        cplx v = -q.value;
        return upper ? v : std::conj(v);
    }
    if (z.imag() < 0) return std::conj(laplace_of_G(p, std::conj(z), cfg));
    const double phi = std::arg(z);
    const cplx dir = std::polar(1.0, -phi);
    const double kappa = rz + p.delta * std::cos(phi);
    auto f = [&](double u) -> cplx {
        if (u <= 0) return 0.0;
        double s = std::pow(u, e);
        if (rz * s > 800) return 0.0;
        cplx w = s * dir;
        cplx g = phi == 0.0 ? cplx(eval_G_real(p, s, cfg)) : eval_G_complex(p, w, cfg);
        return std::exp(-rz * s) * g * (e * s / u);
    };
    auto q = integrate_to_infinity(f, 0.0, std::pow(1 / kappa, 1 - a), cfg);
    if (!q.converged) throw NumericalError(ErrorKind::NonConvergence, "Laplace integral failed", q.abs_error);
    return dir * q.value;
}

}  // namespace stablehcm
