#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stablehcm/boundary.hpp"

namespace stablehcm {

enum class Verdict { HCM, AntiHCM, Neither, Inconclusive };
const char* to_string(Verdict v);

struct ThetaExtremum {
    double r = 0;
    double theta = 0;
    bool maximum = true;
    double prominence = 0;  // in noise units
};

struct ClassificationReport {
    double alpha = 0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<ThetaExtremum> theta_extrema;
    double monotonicity_margin = 0;  // supporting |d theta| over the noise floor
    double noise_floor = 0;
    double run_up = 0;    // largest rise of theta along increasing r
    double drawdown = 0;  // largest fall
    ThetaFunction evidence_grid;
};

struct ClassifyOptions {
    double r_min = 1e-4, r_max = 1e4;
    ThetaOptions theta{};
};

ClassificationReport classify_alpha(double alpha, const QuadratureConfig& cfg = {}, const ClassifyOptions& opt = {});

struct SignWitness {
    double x_pos = 0, x_neg = 0;
    double g_pos = 0, g_neg = 0;
};

// Searches [x_lo, x_hi] for a sign change of g_{alpha,gamma}.
std::optional<SignWitness> sign_change_scan(double alpha, double gamma, std::pair<double, double> x_range = {1e-3, 1e3},
                                            const QuadratureConfig& cfg = {});

struct GgcDiagnostic {
    double alpha = 0;
    std::vector<double> r;
    std::vector<double> neg_arg;  // -arg Lp(-r+)
    bool argument_monotone_decreasing = false;
    double margin = 0;  // smallest decrement over its noise
    std::string conclusion;  // "not GGC" or "inconclusive"
};

GgcDiagnostic ggc_failure_diag(double alpha, const QuadratureConfig& cfg = {}, int n_points = 12,
                               double r_factor = 10.0);

}  // namespace stablehcm
