#include <cmath>
#include <random>

#include "doctest.h"
#include "macexp/macexp.hpp"
#include "random_models.hpp"

using namespace macexp;

namespace {

double entropy(const SourceSpec& src) {
    double h = 0.0;
    for (double p : src.probs)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

// gamma such that rho_gamma = 0.5 on the source (0.25, 0.75); frozen from an
// arbitrary-precision solve of the implicit equation.
constexpr double kGammaHalf = 0.52499598357561379919;

}  // namespace

TEST_CASE("tilted_log_mean basics") {
    SourceSpec src{{0.25, 0.75}};
    CHECK(tilted_log_mean(0.0, src) ==
          doctest::Approx(-entropy(src)).epsilon(1e-12));

    SourceSpec uni{{0.2, 0.2, 0.2, 0.2, 0.2}};
    for (double rho : {0.0, 0.5, 3.0})
        CHECK(tilted_log_mean(rho, uni) ==
              doctest::Approx(-std::log(5.0)).epsilon(1e-12));

    // strictly decreasing in rho for non-uniform sources: the tilt
    // beta = 1/(1+rho) shrinks as rho grows, moving weight off the large mass
    double prev = 1e9;
    for (int j = 0; j <= 40; ++j) {
        double v = tilted_log_mean(-0.9 + j * 0.2, src);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(tilted_log_mean(-1.0, src), std::domain_error);
}

TEST_CASE("solve_rho_gamma tags and interior solutions") {
    SourceSpec src{{0.25, 0.75}};
    CHECK(solve_rho_gamma(0.0, src).tag == RhoGamma::Tag::BelowSupport);
    CHECK(solve_rho_gamma(1.0, src).tag == RhoGamma::Tag::AboveSupport);
    CHECK(solve_rho_gamma(0.1, src).tag == RhoGamma::Tag::BelowSupport);
    CHECK(solve_rho_gamma(0.9, src).tag == RhoGamma::Tag::AboveSupport);
    CHECK_THROWS_AS(solve_rho_gamma(-0.1, src), std::domain_error);

    RhoGamma at_entropy = solve_rho_gamma(std::exp(-entropy(src)), src);
    REQUIRE(at_entropy.interior());
    CHECK(std::fabs(at_entropy.rho_gamma()) < 1e-9);

    RhoGamma mid = solve_rho_gamma(0.5, src);
    REQUIRE(mid.interior());
    CHECK(std::fabs(detail::tilted_log_mean_beta(mid.beta_gamma, src) -
                    std::log(0.5)) < 1e-10);

    RhoGamma half = solve_rho_gamma(kGammaHalf, src);
    REQUIRE(half.interior());
    CHECK(half.rho_gamma() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("solutions below the geometric mean need negative tilt") {
    SourceSpec src{{0.25, 0.75}};
    // geometric mean is exp(mean log p) ~ 0.43; a gamma between min P and that
    // value forces beta < 0 (rho_gamma < -1 region of the tilt)
    RhoGamma low = solve_rho_gamma(0.3, src);
    REQUIRE(low.interior());
    CHECK(low.beta_gamma < 0.0);
    CHECK(std::fabs(detail::tilted_log_mean_beta(low.beta_gamma, src) -
                    std::log(0.3)) < 1e-10);
}

TEST_CASE("es_class degenerate thresholds") {
    SourceSpec src{{0.25, 0.75}};
    for (double rho : {0.0, 0.4, 1.0}) {
        CHECK(es_class(1, rho, src, 0.0) == ExtReal::finite(e_s(rho, src)));
        CHECK(es_class(2, rho, src, 0.0).is_minus_inf());
        CHECK(es_class(2, rho, src, 1.0) == ExtReal::finite(e_s(rho, src)));
        CHECK(es_class(1, rho, src, 1.0).is_minus_inf());
    }
    CHECK_THROWS_AS(es_class(3, 0.5, src, 0.5), std::domain_error);
}

TEST_CASE("both classes agree at the tangency point") {
    SourceSpec src{{0.25, 0.75}};
    RhoGamma rg = solve_rho_gamma(kGammaHalf, src);
    REQUIRE(rg.interior());
    double rho = rg.rho_gamma();
    double a = es_class(1, rho, src, kGammaHalf).value();
    double b = es_class(2, rho, src, kGammaHalf).value();
    CHECK(std::fabs(a - b) < 1e-9);
    CHECK(a == doctest::Approx(e_s(rho, src)).epsilon(1e-9));
}

TEST_CASE("tangent branch matches the explicit first-order formula") {
    SourceSpec src{{0.25, 0.75}};
    double expected = e_s(0.5, src) + e_s_prime(0.5, src) * 0.4;
    CHECK(std::fabs(expected - 0.55327566297630780541) < 1e-12);
    // rho = 0.9 lies above rho_gamma = 0.5, so class 1 takes the tangent
    CHECK(std::fabs(es_class(1, 0.9, src, kGammaHalf).value() - expected) < 1e-9);
    // while class 2 stays on E_s itself
    CHECK(es_class(2, 0.9, src, kGammaHalf).value() ==
          doctest::Approx(e_s(0.9, src)).epsilon(1e-12));
}

TEST_CASE("es_class monotone in gamma, dominated by e_s, convex in rho") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 15; ++t) {
        SystemModel m = testutil::random_model(rng, false);
        const SourceSpec& src = m.source1;
        double rho = u(rng);
        ExtReal prev1 = ExtReal::plus_inf(), prev2 = ExtReal::minus_inf();
        for (int j = 0; j <= 10; ++j) {
            double g = j / 10.0;
            ExtReal c1 = es_class(1, rho, src, g);
            ExtReal c2 = es_class(2, rho, src, g);
            // class 1 nonincreasing, class 2 nondecreasing in gamma
            if (c1.is_finite() && prev1.is_finite())
                CHECK(c1.value() <= prev1.value() + 1e-9);
            else
                CHECK(c1 <= prev1);
            if (c2.is_finite() && prev2.is_finite())
                CHECK(c2.value() >= prev2.value() - 1e-9);
            else
                CHECK(c2 >= prev2);
            prev1 = c1;
            prev2 = c2;
            for (int i = 1; i <= 2; ++i) {
                ExtReal c = es_class(i, rho, src, g);
                if (c.is_finite()) CHECK(c.value() <= e_s(rho, src) + 1e-12);
            }
        }
        // midpoint convexity along rho for an interior gamma
        double g = 0.3 + 0.4 * u(rng);
        for (int i = 1; i <= 2; ++i) {
            double r1 = u(rng), r2 = u(rng);
            ExtReal a = es_class(i, r1, src, g);
            ExtReal b = es_class(i, r2, src, g);
            ExtReal mid = es_class(i, 0.5 * (r1 + r2), src, g);
            if (a.is_finite() && b.is_finite() && mid.is_finite())
                CHECK(mid.value() <= 0.5 * (a.value() + b.value()) + 1e-12);
        }
    }
}

TEST_CASE("interior back-substitution residual below 1e-10") {
    std::mt19937 rng(9);
    for (int t = 0; t < 10; ++t) {
        SystemModel m = testutil::random_model(rng, false);
        const SourceSpec& src = m.source2;
        for (int j = 1; j < 20; ++j) {
            RhoGamma rg = solve_rho_gamma(j / 20.0, src);
            if (!rg.interior()) continue;
            double target = std::log(j / 20.0);
            CHECK(std::fabs(detail::tilted_log_mean_beta(rg.beta_gamma, src) -
                            target) < 1e-10);
        }
    }
}
