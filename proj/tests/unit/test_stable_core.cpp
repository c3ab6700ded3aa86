#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "stablehcm/errors.hpp"
#include "stablehcm/stable_core.hpp"

using namespace stablehcm;
using oracle::rel_err;

TEST_SUITE("stable_core") {

TEST_CASE("params derive beta, delta and the saddle") {
    for (double a : {0.1, 0.3, 0.5, 0.77, 0.95}) {
        auto p = StableParams::one_sided(a);
        CHECK(p.beta * (1 - a) == doctest::Approx(a).epsilon(1e-15));
        CHECK(1 - a * std::pow(p.t0, a - 1) == doctest::Approx(0).epsilon(1e-12));
        CHECK(p.delta == doctest::Approx(-(p.t0 - std::pow(p.t0, a))).epsilon(1e-14));
    }
    auto h = StableParams::one_sided(0.5);
    CHECK(h.delta == doctest::Approx(0.25));
    CHECK(h.t0 == doctest::Approx(0.25));
    CHECK_THROWS_AS(StableParams::make(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(StableParams::make(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(StableParams::make(0.5, 1.2), DomainError);
    CHECK(StableParams::one_sided(0.02).precision_warning());
    CHECK_FALSE(StableParams::one_sided(0.5).precision_warning());
}

TEST_CASE("quadrature config rejects nonpositive tolerances") {
    QuadratureConfig c;
    c.rel_tol = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    QuadratureConfig d;
    d.max_subdivisions = 0;
    CHECK_THROWS_AS(d.validate(), DomainError);
}

TEST_CASE("half-stable density and tail in closed form") {
    auto p = StableParams::one_sided(0.5);
    CHECK(eval_density(p, 1.0) == doctest::Approx(0.2196956447338612).epsilon(1e-12));
    CHECK(eval_tail(p, 1.0) == doctest::Approx(0.5204998778130465).epsilon(1e-10));
    for (double x : {0.01, 0.3, 2.0, 40.0, 1e4}) {
        CHECK(rel_err(eval_density(p, x), oracle::g_half(x)) < 1e-9);
        CHECK(std::fabs(eval_tail(p, x) - oracle::tail_half(x)) < 1e-9);
    }
}

TEST_CASE("frozen reference values") {
    // 40-digit quadrature of the defining integrals (tests/frozen_values.py).
    CHECK(rel_err(eval_density(StableParams::one_sided(0.3), 1.0), 0.11715700256591615) < 1e-9);
    CHECK(rel_err(eval_density(StableParams::one_sided(0.7), 0.5), 0.96511911846936176) < 1e-9);
    CHECK(rel_err(eval_density(StableParams::make(0.2, 0.45), 1e-3), -47.369724429980501) < 1e-7);
    CHECK(rel_err(eval_G_real(StableParams::one_sided(0.35), 2.0), 0.13117928683472159) < 1e-9);
    CHECK(rel_err(eval_G_real(StableParams::one_sided(0.4), 1.0), 0.24614015642629608) < 1e-9);
    CHECK(rel_err(eval_G_real(StableParams::one_sided(0.8), 3.0), 0.062278933773402273) < 1e-9);
    CHECK(rel_err(eval_tail(StableParams::one_sided(0.6), 2.0), 0.32365206645610223) < 1e-8);
}

TEST_CASE("two substitutions agree") {
    auto p = StableParams::one_sided(0.3);
    auto t = density_panels(p, 1.0, Substitution::T);
    auto u = density_panels(p, 1.0, Substitution::U);
    CHECK(std::fabs(t.value - u.value) < 1e-8);
}

TEST_CASE("density is positive and integrates to one") {
    for (double a : {0.2, 0.4, 0.6, 0.8}) {
        auto p = StableParams::one_sided(a);
        for (double r : {0.5, 1.0, 10.0, 1e3, 1e8}) CHECK(eval_density(p, r) > 0);
        for (double r : {1e-3, 1e-2}) CHECK(eval_density(p, r) >= 0);
        CHECK(eval_tail(p, 1e-9) == doctest::Approx(1.0).epsilon(1e-6));
        double prev = 1.0;
        for (double x : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            double t = eval_tail(p, x);
            CHECK(t <= prev + 1e-12);
            prev = t;
        }
    }
}

TEST_CASE("G: direct integral and transformed density agree") {
    for (double a : {0.2, 0.35, 0.5, 0.65, 0.8})
        for (double x : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            auto p = StableParams::one_sided(a);
            auto d = G_direct(p, x);
            double g = eval_G_real(p, x);
            if (d.condition() < 1e6) CHECK(rel_err(d.value, g) < 1e-6);
            else CHECK(std::fabs(d.value - g) <= 10 * d.abs_error);
        }
    // Deep in the tail the direct integral cancels; 60-digit references (tests/frozen_values.py).
    CHECK(rel_err(eval_G_real(StableParams::one_sided(0.2), 100.0), 3.7874017076172478e-25) < 1e-8);
    CHECK(rel_err(eval_G_real(StableParams::one_sided(0.35), 100.0), 3.7343291506363297e-18) < 1e-8);
    CHECK(rel_err(eval_G_real(StableParams::one_sided(0.65), 100.0), 2.9086762276989401e-9) < 1e-8);
    auto det = eval_G_real_detail(StableParams::one_sided(0.35), 2.0);
    CHECK(det.cross_checked);
    CHECK(rel_err(G_direct(StableParams::one_sided(0.35), 2.0).value, det.value) < 1e-8);
}

TEST_CASE("G regimes cover extreme arguments") {
    auto p = StableParams::one_sided(0.4);
    auto lo = eval_G_real_detail(p, 1e-12);
    CHECK(lo.regime == Regime::Series);
    CHECK(rel_err(lo.value * std::pow(1e-12, 0.4), oracle::c0_of(0.4)) < 1e-3);
    auto hi = eval_G_real_detail(p, 1e3);
    CHECK(hi.value > 0);
    CHECK(eval_G_real(p, 1e4) == 0.0);
    double scaled = G_scaled_descent(p, 1e4).value * std::sqrt(1e4);
    CHECK(rel_err(scaled, oracle::c_inf_of(0.4)) < 1e-3);
    CHECK(rel_err(G_small_series(p, 1e-6).value, G_scaled_descent(p, 1e-6).value * std::exp(-p.delta * 1e-6)) < 1e-10);
    CHECK_THROWS_AS(eval_G_real(p, 0.0), DomainError);
    CHECK_THROWS_AS(eval_G_real(StableParams::make(0.4, 0.3), 1.0), DomainError);
}

TEST_CASE("complex continuation") {
    auto p = StableParams::one_sided(0.4);
    cplx z(1, 2);
    cplx a = eval_G_complex(p, z), b = eval_G_complex(p, std::conj(z));
    CHECK(std::abs(b - std::conj(a)) < 1e-10 * std::abs(a));
    CHECK(rel_err(eval_G_complex(p, cplx(2.5, 0)).real(), eval_G_real(p, 2.5)) < 1e-8);
    auto h = StableParams::one_sided(0.5);
    cplx want = oracle::half_norm * std::pow(cplx(0, 1), -0.5) * std::exp(cplx(0, -0.25));
    CHECK(std::abs(eval_G_complex(h, cplx(0, 1)) - want) < 1e-10);
    CHECK_THROWS_AS(eval_G_complex(p, cplx(-1, 0)), DomainError);
}

TEST_CASE("survival function") {
    auto h = StableParams::one_sided(0.5);
    // G_1/2 is a Gamma(1/2, 1/4) density.
    CHECK(G_survival(h, 1.0).value == doctest::Approx(std::erfc(0.5)).epsilon(1e-10));
}

TEST_CASE("scaling identity") {
    CHECK(std::fabs(mixture_identity_residual(0.25, 0.25, 0.5, 1.0)) < 1e-5);
    CHECK(std::fabs(mixture_identity_residual(0.3, 0.3, 0.6, 2.0)) < 1e-5);
    CHECK(std::fabs(mixture_identity_residual(0.3, 0.3, 0.3, 1.2)) < 1e-5);
    CHECK_THROWS_AS(mixture_identity_residual(0.5, 0.5, 0.4, 1.0), DomainError);
    CHECK(std::fabs(half_stable_mixture(0.25, 0.25, 1.0) - eval_density(StableParams::one_sided(0.25), 1.0)) < 1e-5);
    CHECK(std::fabs(half_stable_mixture(0.3, 0.2, 0.5) - eval_density(StableParams::make(0.3, 0.2), 0.5)) < 1e-5);
    CHECK(half_stable_mixture(0.5, 0.5, 1.0) == doctest::Approx(eval_density(StableParams::one_sided(0.5), 1.0)));
    CHECK_THROWS_AS(half_stable_mixture(0.6, 0.3, 1.0), DomainError);
}

TEST_CASE("signed densities keep their integral representation") {
    // gamma < alpha: x^(-1-alpha) g(1/x) is nonincreasing.
    auto p = StableParams::make(0.4, 0.2);
    double prev = HUGE_VAL;
    for (double x = 0.1; x <= 10; x *= 1.3) {
        double v = std::pow(x, -1.4) * eval_density(p, 1 / x);
        CHECK(v <= prev * (1 + 1e-10));
        prev = v;
    }
}

}
