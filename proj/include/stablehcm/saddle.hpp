#pragma once

#include <complex>
#include <span>
#include <vector>

#include "stablehcm/stable_core.hpp"

namespace stablehcm {

enum class Branch { Plus, Minus };

// f(v) = v - v^alpha + delta with the power continued through the upper
// (Plus, arg in [0, 2pi)) or lower (Minus, arg in (-2pi, 0]) half-plane.
struct PhaseFunction {
    double alpha = 0.5;
    double delta = 0.25;
    double t0 = 0.25;
    Branch branch = Branch::Plus;

    static PhaseFunction make(double alpha, Branch b);
    cplx power(cplx v) const;  // v^alpha on this branch
    cplx operator()(cplx v) const { return v - power(v) + delta; }
    cplx derivative(cplx v) const { return 1.0 - alpha * power(v) / v; }
};

struct SaddleCurve {
    double alpha = 0.5;
    double theta = 1.0;
    std::vector<double> r;
    std::vector<cplx> v_plus;
    std::vector<cplx> v_minus;

    double max_residual() const;
};

// Lower end of the admissible |theta| range, (1/2 - alpha)^+.
double theta_band(double alpha);

SaddleCurve trace_curves(const StableParams& p, double theta, double r_max, int n_steps);
// Smallest A with |v(r)| <= A + 2r on every stored sample.
double curve_growth_check(const SaddleCurve& c);

cplx contour_eval_G(const StableParams& p, cplx z, double theta, const QuadratureConfig& cfg = {});
// e^(delta z) G(z) from the contour integral, without forming e^(-delta z).
cplx contour_eval_G_scaled(const StableParams& p, cplx z, double theta, const QuadratureConfig& cfg = {});
// Admissible theta making z e^(i pi theta) as close to the negative axis as allowed.
double descent_theta(const StableParams& p, cplx z);

struct RoughBound {
    double A = 0.0;
    double B = 0.0;
};

// A + B/|z| majorizing |G(z) e^(delta z)| on the set, chosen to minimise the worst ratio of bound to value.
RoughBound rough_bound_scan(const StableParams& p, std::span<const cplx> zs, const QuadratureConfig& cfg = {});

}  // namespace stablehcm
