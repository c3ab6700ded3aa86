#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stablehcm/boundary.hpp"

namespace stablehcm {

// theta data of an exponential-Stieltjes representation.
struct ThetaRep {
    enum class Kind { Table, Constant, Step, Function };
    Kind kind = Kind::Constant;
    ThetaFunction table;
    double constant = 0.0;
    double step_at = 1.0;      // theta = step_height on [step_at, inf)
    double step_height = 0.0;
    std::function<double(double)> fn;
    double fn_left = 0.0, fn_right = 0.0;

    static ThetaRep from_table(ThetaFunction t);
    static ThetaRep make_constant(double c);
    static ThetaRep make_step(double at, double height);
    static ThetaRep from_function(std::function<double(double)> f, double left, double right);

    double operator()(double t) const;
    double left_limit() const;
    double right_limit() const;
    bool nondecreasing() const;
    bool nonincreasing() const;
};

// H(z) = c exp(-a z - b / z) exp int (1/(z+t) - 1/(1+t)) theta(t) dt.
struct HcmRepresentation {
    double c = 1.0;
    double a = 0.0;
    double b = 0.0;
    ThetaRep theta;

    bool is_hcm_candidate() const { return theta.nondecreasing(); }
    bool is_anti_hcm_candidate() const { return theta.nonincreasing(); }
    void check_integrable() const;
};

// int (1/(z+t) - 1/(1+t)) theta(t) dt; z = -r +/- 0i selects the side of the cut.
cplx stieltjes_log(const ThetaRep& th, cplx z, const QuadratureConfig& cfg = {});
cplx exp_stieltjes(const ThetaRep& th, cplx z, const QuadratureConfig& cfg = {});
cplx eval_hcm(const HcmRepresentation& rep, cplx z, const QuadratureConfig& cfg = {});

// G(1) e^(-delta (z - 1)) exp_stieltjes(theta, z). A positive `check_tol`
// compares with the direct evaluation and throws beyond ten times it.
cplx reconstruct_G(const StableParams& p, const ThetaFunction& theta, cplx z, const QuadratureConfig& cfg = {},
                   double check_tol = 0.0);

struct Violation {
    int order = 0;
    double location = 0.0;  // left end of the offending window
    double u = 0.0;         // scale parameter for HCM probes
    double margin = 0.0;    // slack in units of the noise floor
};

struct CmProbeReport {
    int max_order_checked = 0;
    std::optional<Violation> first_violation;
    bool pass = true;
    bool inconclusive = false;  // negative slack within the noise floor
    double margin = 0.0;        // smallest slack over all checks, in noise units

    // Every check clears the noise floor.
    bool confident() const { return pass && margin >= 1.0; }
};

std::vector<double> geometric_grid(double lo, double hi, double ratio);

// Sign alternation of divided differences on consecutive windows of `xs`.
CmProbeReport cm_probe_values(std::span<const double> xs, std::span<const double> fs, int max_order,
                              double rel_noise = 1e-12);
CmProbeReport cm_probe(const std::function<double(double)>& f, std::span<const double> grid, int max_order = 6,
                       double rel_noise = 1e-12);

struct HcmProbeGrids {
    std::vector<double> u{0.25, 1.0, 4.0};
    std::vector<double> v;  // empty selects 25 points with w = v + 1/v evenly spaced on [2, 8.125]
};
std::vector<double> default_v_grid(int n = 25, double v_max = 8.0);
CmProbeReport hcm_probe(const std::function<double(double)>& f, const HcmProbeGrids& grids = {}, int max_order = 6,
                        double rel_noise = 1e-12);

struct Truncation {
    HcmRepresentation rep;
    double eps_n = 0.0;
    double eps_hat_n = 0.0;
};
Truncation truncate_theta(const HcmRepresentation& rep, double n, const QuadratureConfig& cfg = {});

double mult_convolve(const std::function<double(double)>& H, const std::function<double(double)>& g, double x,
                     const QuadratureConfig& cfg = {});

struct TiltedDensity {
    std::function<double(double)> density;
    double m_beta = 1.0;
};
TiltedDensity tilt_density(const std::function<double(double)>& g, double beta_exp, const QuadratureConfig& cfg = {});

// Analytic continuation of int e^{-zx} G(x) dx to |z| > delta off the cut;
// z = -r + 0i gives the upper boundary value.
cplx laplace_of_G(const StableParams& p, cplx z, const QuadratureConfig& cfg = {});

}  // namespace stablehcm
