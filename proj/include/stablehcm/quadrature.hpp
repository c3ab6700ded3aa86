#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "stablehcm/errors.hpp"

namespace stablehcm {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    double truncation_tail_tol = 1e-17;

    void validate() const;
    // Same tolerances with a tightened relative target.
    QuadratureConfig with_rel_tol(double r) const {
        QuadratureConfig c = *this;
        c.rel_tol = r;
        return c;
    }
};

template <class T>
struct QuadResult {
    T value{};
    double abs_error = 0.0;
    double l1 = 0.0;  // integral of |f|, used as a conditioning gauge
    int subdivisions = 0;
    bool converged = true;

    double condition() const {
        double m = std::abs(value);
        return m > 0 ? l1 / m : std::numeric_limits<double>::infinity();
    }
};

namespace detail {

struct GK21 {
    double x[11];
    double wk[11];
    double wg[5];
    static const GK21& get();
};

inline double mag(double v) { return std::fabs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
    double a, b;
    T value;
    double err;
    double l1;
    bool operator<(const Segment& o) const { return err < o.err; }
};

template <class F>
auto gk21(F& f, double a, double b) {
    using T = decltype(f(a));
    const GK21& r = GK21::get();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fv[21];
    fv[0] = f(c);
    for (int i = 1; i < 11; ++i) {
        double d = h * r.x[i];
        fv[2 * i - 1] = f(c - d);
        fv[2 * i] = f(c + d);
    }
    T k = r.wk[0] * fv[0];
    T g{};
    double resabs = r.wk[0] * mag(fv[0]);
    for (int i = 1; i < 11; ++i) {
        T s = fv[2 * i - 1] + fv[2 * i];
        k += r.wk[i] * s;
        resabs += r.wk[i] * (mag(fv[2 * i - 1]) + mag(fv[2 * i]));
        if (i % 2 == 1) g += r.wg[i / 2] * s;
    }
    T mean = 0.5 * k;
    double resasc = r.wk[0] * mag(fv[0] - mean);
    for (int i = 1; i < 11; ++i)
        resasc += r.wk[i] * (mag(fv[2 * i - 1] - mean) + mag(fv[2 * i] - mean));
    const double ah = std::fabs(h);
    double err = mag((k - g) * h);
    resasc *= ah;
    resabs *= ah;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
    return Segment<T>{a, b, k * h, err, resabs};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (10-point Gauss / 21-point Kronrod nodes of
// Boost.Math, QUADPACK error heuristic). Optional interior breakpoints seed
// the initial partition. Never throws on non-convergence; check `converged`.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureConfig& cfg, std::span<const double> breaks = {}) {
    using T = decltype(f(a));
    using Seg = detail::Segment<T>;
    QuadResult<T> out;
    if (a == b) return out;
    std::vector<double> pts{a};
    for (double p : breaks)
        if (p > std::min(a, b) && p < std::max(a, b)) pts.push_back(p);
    pts.push_back(b);
    if (a < b) std::sort(pts.begin() + 1, pts.end() - 1);
    else std::sort(pts.begin() + 1, pts.end() - 1, std::greater<>());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<Seg> heap;
    T total{};
    double err = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Seg s = detail::gk21(f, pts[i], pts[i + 1]);
        total += s.value;
        err += s.err;
        heap.push(s);
    }
    int n = static_cast<int>(heap.size());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto l1_sum = [&] {
        double l = 0;
        auto copy = heap;
        while (!copy.empty()) {
            l += copy.top().l1;
            copy.pop();
        }
        return l;
    };
    bool ok = true;
    while (err > std::max(cfg.abs_tol, cfg.rel_tol * detail::mag(total))) {
        if (n >= cfg.max_subdivisions) {
            ok = false;
            break;
        }
        Seg worst = heap.top();
        double mid = 0.5 * (worst.a + worst.b);
        if (std::fabs(worst.b - worst.a) <= 4 * eps * std::max(std::fabs(worst.a), std::fabs(worst.b)) ||
            mid == worst.a || mid == worst.b) {
            // Cannot split further; accept if roundoff-limited.
            ok = err <= 100 * eps * l1_sum() + cfg.abs_tol;
            break;
        }
        heap.pop();
        Seg l = detail::gk21(f, worst.a, mid);
        Seg r = detail::gk21(f, mid, worst.b);
        total += (l.value + r.value) - worst.value;
        err += (l.err + r.err) - worst.err;
        heap.push(l);
        heap.push(r);
        ++n;
        if (n % 64 == 0) {
            // Resum to shed accumulated cancellation in the running totals.
            auto copy = heap;
            T t{};
            double e = 0;
            while (!copy.empty()) {
                t += copy.top().value;
                e += copy.top().err;
                copy.pop();
            }
            total = t;
            err = e;
        }
    }
    T t{};
    double e = 0, l = 0;
    while (!heap.empty()) {
        t += heap.top().value;
        e += heap.top().err;
        l += heap.top().l1;
        heap.pop();
    }
    out.value = t;
    out.abs_error = e;
    out.l1 = l;
    out.subdivisions = n;
    out.converged = ok || e <= std::max(cfg.abs_tol, cfg.rel_tol * detail::mag(t)) || e <= 100 * eps * l;
    return out;
}

// Integrate over [a, inf) on panels of doubling width starting at `h0`.
// Stops once two consecutive panels contribute less than the tail tolerance.
template <class F>
auto integrate_to_infinity(F&& f, double a, double h0, const QuadratureConfig& cfg,
                           std::span<const double> breaks = {}, int max_panels = 400) {
    using T = decltype(f(a));
    QuadResult<T> out;
    double lo = a, h = h0;
    int quiet = 0;
    for (int k = 0; k < max_panels; ++k) {
        double hi = lo + h;
        auto p = integrate(f, lo, hi, cfg, breaks);
        out.value += p.value;
        out.abs_error += p.abs_error;
        out.l1 += p.l1;
        out.subdivisions += p.subdivisions;
        out.converged = out.converged && p.converged;
        double scale = std::max(detail::mag(out.value), cfg.abs_tol);
        if (p.l1 <= cfg.truncation_tail_tol * scale || p.l1 == 0.0) {
            if (++quiet >= 2) return out;
        } else {
            quiet = 0;
        }
        lo = hi;
        h *= 2;
    }
    out.converged = false;
    return out;
}

// Wynn epsilon acceleration of a sequence of partial sums. Returns the
// accelerated limit and a crude error estimate from the last two diagonals.
template <class T>
std::pair<T, double> wynn_epsilon(const std::vector<T>& s) {
    const size_t n = s.size();
    if (n < 3) return {n ? s.back() : T{}, std::numeric_limits<double>::infinity()};
    T best = s.back();
    double best_err = detail::mag(s.back() - s[n - 2]);
    // e_{-1} = 0, e_0 = s; iterate columns.
    std::vector<T> em1(n, T{});
    std::vector<T> cur(s.begin(), s.end());
    for (size_t col = 1; col < n; ++col) {
        std::vector<T> next(cur.size() - 1);
        bool bad = false;
        for (size_t i = 0; i + 1 < cur.size(); ++i) {
            T d = cur[i + 1] - cur[i];
            if (detail::mag(d) == 0.0) {
                bad = true;
                break;
            }
            next[i] = em1[i + 1] + T(1) / d;
        }
        if (bad) break;
        if (col % 2 == 0 && next.size() >= 2) {
            T a = next.back(), b = next[next.size() - 2];
            double e = detail::mag(a - b);
            if (e < best_err) {
                best_err = e;
                best = a;
            }
        }
        em1 = cur;
        cur = std::move(next);
        if (cur.size() < 2) break;
    }
    return {best, best_err};
}

}  // namespace stablehcm
