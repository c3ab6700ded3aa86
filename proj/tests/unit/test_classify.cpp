#include <doctest.h>

#include <cmath>

#include "stablehcm/classify.hpp"
#include "stablehcm/errors.hpp"
#include "stablehcm/hcm.hpp"

using namespace stablehcm;

TEST_SUITE("classify") {

TEST_CASE("verdicts") {
    auto r4 = classify_alpha(0.4);
    CHECK(r4.verdict == Verdict::HCM);
    CHECK(r4.theta_extrema.empty());
    auto r7 = classify_alpha(0.7);
    CHECK(r7.verdict == Verdict::AntiHCM);
    auto r25 = classify_alpha(0.25);
    CHECK(r25.verdict == Verdict::Neither);
    REQUIRE_FALSE(r25.theta_extrema.empty());
    CHECK(r25.theta_extrema.front().prominence > 10);
    auto third = classify_alpha(1.0 / 3);
    CHECK((third.verdict == Verdict::HCM || third.verdict == Verdict::Inconclusive));
    auto half = classify_alpha(0.5);
    CHECK((half.verdict == Verdict::HCM || half.verdict == Verdict::Inconclusive));
    for (const auto* r : {&r4, &r7, &r25}) {
        CHECK(std::fabs(r->evidence_grid.theta.front() - r->alpha) < 0.02);
        CHECK(std::fabs(r->evidence_grid.theta.back() - 0.5) < 0.01);
    }
    CHECK_THROWS_AS(classify_alpha(1.5), DomainError);
}

TEST_CASE("verdicts agree with the hcm probe") {
    HcmProbeGrids g;
    g.v = default_v_grid(8, (9 + std::sqrt(77.0)) / 2);
    QuadratureConfig tight;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 0;
    for (double a : {0.2, 0.25, 0.3, 0.35, 0.4, 0.45}) {
        auto p = StableParams::one_sided(a);
        auto rep = classify_alpha(a);
        g.u = {100, 300};
        auto probe = hcm_probe([&](double x) { return G_scaled_descent(p, x, tight).value; }, g, 7, 1e-14);
        if (rep.verdict == Verdict::HCM) CHECK(probe.pass);
        if (rep.verdict == Verdict::Neither) CHECK_FALSE(probe.confident());
    }
}

TEST_CASE("sign changes") {
    auto w = sign_change_scan(0.2, 0.45);
    REQUIRE(w.has_value());
    CHECK(w->g_pos > 0);
    CHECK(w->g_neg < 0);
    CHECK(sign_change_scan(0.2, 0.5).has_value());
    CHECK_FALSE(sign_change_scan(0.3, 0.3).has_value());
    CHECK_FALSE(sign_change_scan(0.4, 0.4).has_value());
    CHECK_THROWS_AS(sign_change_scan(0.2, 0.0), DomainError);
}

TEST_CASE("GGC failure diagnostic") {
    for (double a : {0.6, 0.7}) {
        auto d = ggc_failure_diag(a);
        CHECK(d.argument_monotone_decreasing);
        CHECK(d.conclusion == "not GGC");
        for (double r : d.r) CHECK(r > StableParams::one_sided(a).delta);
    }
    auto edge = ggc_failure_diag(0.51);
    CHECK((edge.conclusion == "not GGC" || edge.conclusion == "inconclusive"));
    CHECK_THROWS_AS(ggc_failure_diag(0.4), DomainError);
}

}
