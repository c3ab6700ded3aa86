#pragma once

#include <array>
#include <span>
#include <vector>

#include "stablehcm/stable_core.hpp"

namespace stablehcm {

enum class Side { Upper, Lower };

// G(-r +/- i0) in polar form. The e^(delta r) growth is kept out of `scaled`
// so large r never overflows.
struct BoundarySample {
    double r = 0.0;
    cplx scaled;             // e^(-delta r) G(-r +/- i0)
    double log_modulus = 0;  // log R(r)
    double theta = 0.0;      // -arg G(-r+) / pi, in (0, 1)
    double theta_noise = 0;  // uncertainty of theta from the quadrature error

    cplx value(double delta) const { return scaled * std::exp(delta * r); }
    double modulus() const { return std::exp(log_modulus); }
};

struct ThetaFunction {
    double alpha = 0.5;
    std::vector<double> nodes;
    std::vector<double> theta;
    std::vector<double> scaled_modulus;  // R(r) e^(-delta r)
    std::vector<double> noise;
    double left_limit = 0.5;
    double right_limit = 0.5;
    // theta(t) ~ left_limit + k1 t^p + k2 t^(2p) near 0, p = 1 - alpha.
    std::array<double, 2> left_coeffs{0.0, 0.0};
    double left_power = 0.5;
    double extrapolated_left = 0.5;
    double extrapolated_right = 0.5;

    double operator()(double t) const;  // piecewise linear in t, declared limits outside
};

struct AsymptoticConstants {
    double delta = 0, t0 = 0, c0 = 0, c_inf = 0, G_at_1 = 0;
    double c0_fitted = 0, c_inf_fitted = 0;
};

BoundarySample boundary_value(const StableParams& p, double r, const QuadratureConfig& cfg = {},
                              Side side = Side::Upper);
// Entire-function series for G(-r+), usable at every r; an independent oracle.
BoundarySample boundary_value_series(const StableParams& p, double r, Side side = Side::Upper);

struct ThetaOptions {
    int n = 200;
    double interp_tol = 2e-7;
    int max_nodes = 20000;
};

ThetaFunction theta_extract(const StableParams& p, double r_min, double r_max, const QuadratureConfig& cfg = {},
                            const ThetaOptions& opt = {});

// c0 = (1 - alpha) / Gamma(1 - alpha) and c_inf = (2 pi beta)^(-1/2) alpha^(beta/2).
double c0_constant(double alpha);
double c_inf_constant(double alpha);
AsymptoticConstants asymptotic_constants(const StableParams& p, const QuadratureConfig& cfg = {});

struct WeightedRow {
    double r, re, im;
};
std::vector<WeightedRow> weighted_parts(const StableParams& p, std::span<const double> r_grid,
                                        const QuadratureConfig& cfg = {});

double cross_check_identity(const StableParams& p, double r, const QuadratureConfig& cfg = {});

}  // namespace stablehcm
