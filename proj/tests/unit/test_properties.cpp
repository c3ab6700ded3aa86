#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "stablehcm/hcm.hpp"
#include "stablehcm/saddle.hpp"

using namespace stablehcm;
using oracle::rel_err;

namespace {

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t s) : rng(s) {}
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    double logu(double a, double b) { return std::exp(uni(std::log(a), std::log(b))); }
    cplx off_cut() { return std::polar(logu(0.05, 50), uni(-0.95, 0.95) * oracle::pi); }
};

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("Schwarz reflection and real-axis agreement") {
    Gen g(11);
    for (int i = 0; i < 40; ++i) {
        auto p = StableParams::one_sided(g.uni(0.1, 0.9));
        cplx z = g.off_cut();
        cplx a = eval_G_complex(p, z), b = eval_G_complex(p, std::conj(z));
        CHECK(std::abs(b - std::conj(a)) <= 1e-9 * std::abs(a));
        double x = g.logu(0.05, 20);
        CHECK(rel_err(eval_G_complex(p, cplx(x, 0)).real(), eval_G_real(p, x)) < 1e-8);
    }
}

TEST_CASE("constant theta is a power on every quadrant") {
    Gen g(12);
    for (int i = 0; i < 200; ++i) {
        double c = g.uni(-2, 2);
        cplx z = g.off_cut();
        cplx want = std::pow(z, -c);
        CHECK(std::abs(exp_stieltjes(ThetaRep::make_constant(c), z) - want) <= 1e-12 * std::abs(want));
    }
}

TEST_CASE("boundary samples stay in the lower half plane") {
    Gen g(13);
    for (int i = 0; i < 60; ++i) {
        auto p = StableParams::one_sided(g.uni(0.1, 0.9));
        auto b = boundary_value(p, g.logu(1e-4, 1e4));
        CHECK(b.scaled.imag() < 0);
        CHECK(b.theta > 0);
        CHECK(b.theta < 1);
    }
}

TEST_CASE("monotone theta tables pass the hcm probe") {
    Gen g(14);
    for (int i = 0; i < 6; ++i) {
        double lo = g.uni(0, 0.5), hi = lo + g.uni(0.05, 0.5), s = g.logu(0.1, 10);
        HcmRepresentation rep;
        rep.theta = ThetaRep::from_function([=](double t) { return lo + (hi - lo) * t / (s + t); }, lo, hi);
        REQUIRE(rep.is_hcm_candidate());
        CHECK(hcm_probe([&](double x) { return eval_hcm(rep, x).real(); }, {}, 5, 1e-10).pass);
    }
}

TEST_CASE("products with gamma mixtures stay HCM") {
    Gen g(15);
    for (int i = 0; i < 3; ++i) {
        double k = g.uni(0.5, 3), lam = g.uni(0.2, 2);
        auto H = [lam](double t) { return std::pow(1 + t, -lam); };
        auto gd = [k](double y) { return oracle::gamma_density(k, 1, y); };
        CHECK(hcm_probe([&](double x) { return mult_convolve(H, gd, x); }, {}, 4, 1e-9).pass);
    }
}

TEST_CASE("saddle curves are conjugate-symmetric and distinct") {
    Gen g(16);
    for (int i = 0; i < 8; ++i) {
        double a = g.uni(0.15, 0.85);
        auto p = StableParams::one_sided(a);
        double th = g.uni(theta_band(a) + 0.02, 1.0);
        auto pos = trace_curves(p, th, 20, 150), neg = trace_curves(p, -th, 20, 150);
        CHECK(pos.max_residual() < 1e-8);
        CHECK(neg.max_residual() < 1e-8);
        for (size_t k = 1; k < pos.r.size(); ++k) {
            CHECK(std::abs(neg.v_minus[k] - std::conj(pos.v_plus[k])) < 1e-9 * (1 + std::abs(pos.v_plus[k])));
            CHECK(std::abs(pos.v_plus[k] - pos.v_minus[k]) > 0);
        }
    }
}

TEST_CASE("contour and direct evaluation agree") {
    Gen g(17);
    for (int i = 0; i < 15; ++i) {
        auto p = StableParams::one_sided(g.uni(0.2, 0.8));
        cplx z = std::polar(g.logu(0.2, 10), g.uni(-0.8, 0.8) * oracle::pi);
        CHECK(rel_err(contour_eval_G(p, z, descent_theta(p, z)), eval_G_complex(p, z)) < 1e-4);
    }
}

}
