#pragma once

#include <complex>
#include <string>

#include "stablehcm/quadrature.hpp"

namespace stablehcm {

using cplx = std::complex<double>;

// Validated (alpha, gamma) with the derived exponents.
struct StableParams {
    double alpha = 0.5;
    double gamma = 0.5;
    double beta = 1.0;   // alpha / (1 - alpha)
    double delta = 0.25; // (1 - alpha) alpha^(alpha / (1 - alpha))
    double t0 = 0.25;    // alpha^(1 / (1 - alpha))

    static StableParams make(double alpha, double gamma);
    static StableParams one_sided(double alpha) { return make(alpha, alpha); }
    bool one_sided_law() const { return gamma == alpha; }
    // True outside the band where accuracy targets are stated.
    bool precision_warning() const { return alpha < 0.05 || alpha > 0.95; }
};

enum class Regime { Quadrature, Descent, Series };
const char* to_string(Regime r);

struct Evaluation {
    double value = 0.0;
    double abs_error = 0.0;
    Regime regime = Regime::Quadrature;
    bool cross_checked = false;
};

enum class Substitution { T, U };

// g_{alpha,gamma}(r).
double eval_density(const StableParams& p, double r, const QuadratureConfig& cfg = {});
Evaluation eval_density_detail(const StableParams& p, double r, const QuadratureConfig& cfg = {});
// Raw oscillatory panel quadrature in the variable t or u = t^alpha.
QuadResult<double> density_panels(const StableParams& p, double r, Substitution s, const QuadratureConfig& cfg = {});

// Integral of g_{alpha,gamma} over [x, inf).
double eval_tail(const StableParams& p, double x, const QuadratureConfig& cfg = {});

// Density of S_alpha^(-beta).
double eval_G_real(const StableParams& p, double x, const QuadratureConfig& cfg = {});
Evaluation eval_G_real_detail(const StableParams& p, double x, const QuadratureConfig& cfg = {});
// The direct integral for G on (0, inf) in its native variable.
QuadResult<double> G_direct(const StableParams& p, double x, const QuadratureConfig& cfg = {});
// e^(delta x) G(x) from the positive steepest-descent integral.
QuadResult<double> G_scaled_descent(const StableParams& p, double x, const QuadratureConfig& cfg = {});
// Convergent expansion of G in powers of x^(1 - alpha), used near 0.
QuadResult<double> G_small_series(const StableParams& p, double x);
// P(S_alpha^(-beta) > x).
QuadResult<double> G_survival(const StableParams& p, double x, const QuadratureConfig& cfg = {});
// Steepest-descent phase A(psi) on (0, pi); A(0+) = delta.
double descent_phase(double alpha, double psi);

// Analytic continuation of G to the plane cut along (-inf, 0].
cplx eval_G_complex(const StableParams& p, cplx z, const QuadratureConfig& cfg = {});
QuadResult<cplx> G_complex_direct(const StableParams& p, cplx z, const QuadratureConfig& cfg = {});

// LHS - RHS of int g_{a,g}(xy) g_{d'}(y) y dy = x^(d'-1) g_{a/d',g}(x^d').
double mixture_identity_residual(double alpha, double gamma, double delta_prime, double x,
                                 const QuadratureConfig& cfg = {});
// g_{alpha,gamma}(x) written as a half-stable scale mixture of g_{2alpha,2gamma}.
double half_stable_mixture(double alpha, double gamma, double x, const QuadratureConfig& cfg = {});

}  // namespace stablehcm
