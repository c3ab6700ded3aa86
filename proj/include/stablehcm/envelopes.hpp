#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "stablehcm/boundary.hpp"

namespace stablehcm {

// Bounds of x^alpha e^(delta x) G(x) on (0, 1] (A) and x^(1/2) e^(delta x) G(x) on [1, inf) (B).
struct EnvelopeConstants {
    double alpha = 0.5, delta = 0.25;
    double c0 = 0, c_inf = 0, G_at_1 = 0;
    double A_plus = 0, A_minus = 0, B_plus = 0, B_minus = 0;
    double x_max = 0;
    int grid_density = 0;

    void validate() const;
};

// f1 = x^-alpha e^(-delta x) on (0, 1], f2 = x^-1/2 e^(-delta x) on (1, inf).
double envelope_f1(double alpha, double delta, double x);
double envelope_f2(double delta, double x);

EnvelopeConstants envelope_constants(const StableParams& p, int grid_density = 200, const QuadratureConfig& cfg = {});

struct EnvelopeReport {
    bool ok = true;
    double lower_slack = 0;  // min over the grid of (G - lower) / G
    double lower_x = 0;
    double upper_slack = 0;  // min over the grid of (upper - G) / G
    double upper_x = 0;
    double tolerance = 0;
};

EnvelopeReport check_envelope(const StableParams& p, const EnvelopeConstants& consts, std::span<const double> x_grid,
                              const QuadratureConfig& cfg = {});
// Bounds with the constants c0, c_inf and e^delta G(1); the orientation follows the data.
EnvelopeReport sharp_envelope_check(const StableParams& p, std::span<const double> x_grid,
                                    const QuadratureConfig& cfg = {});

// Total mass of A_plus f1 + B_plus f2.
double envelope_mass(const EnvelopeConstants& consts);

// Counter-based uniform on (0, 1): the k-th draw of stream `seed`.
double counter_uniform(std::uint64_t seed, std::uint64_t k);

struct SampleSet {
    std::vector<double> x;
    double acceptance_rate = 0;
    double expected_rate = 0;  // 1 / envelope_mass
    std::uint64_t candidates = 0;
};

SampleSet sample_inverse_beta_power(const StableParams& p, std::size_t n, std::uint64_t seed,
                                    const EnvelopeConstants& consts, const QuadratureConfig& cfg = {});

// sup |F_n - F| for an empirical sample.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace stablehcm
