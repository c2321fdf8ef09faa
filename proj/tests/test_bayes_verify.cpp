#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "doctest.h"
#include "varshrink/bayes_verify.hpp"
#include "varshrink/sampling.hpp"
#include "varshrink/special_functions.hpp"

using namespace varshrink;

TEST_CASE("closed-form marginal, hand value and scaling") {
    const PriorHyper hyper{-2.0, {4, 2}};
    // c = Gamma(2) 2^2 B(1,1) = 4, m(1,1) = c / (1 * 2) = 2
    CHECK(marginal_closed(1.0, 1.0, hyper) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(marginal_closed(3.0, 2.0, hyper) ==
          doctest::Approx(4.0 / (2.0 * 5.0)).epsilon(1e-13));

    // homogeneity: m(c^2 x_sq, c^2 s) = c^{-n - 2(p/2+a+1)} m(x_sq, s)
    Rng rng({31, 0});
    for (int i = 0; i < 50; ++i) {
        const double x_sq = 0.1 + 5.0 * rng.uniform();
        const double s = 0.1 + 5.0 * rng.uniform();
        const double c = 0.3 + 2.0 * rng.uniform();
        const double power = -(hyper.dims.n + 2.0 * (0.5 * hyper.dims.p + hyper.a + 1.0));
        CHECK(marginal_closed(c * c * x_sq, c * c * s, hyper) ==
              doctest::Approx(std::pow(c, power) * marginal_closed(x_sq, s, hyper))
                  .epsilon(1e-12));
    }
}

TEST_CASE("numeric marginal agrees with the closed form") {
    const QuadConfig cfg;
    const PriorHyper hyper{-2.0, {4, 2}};
    CHECK(marginal_numeric(1.0, 1.0, hyper, cfg) ==
          doctest::Approx(2.0).epsilon(1e-11));

    // x_sq = 0 collapses the lambda integral to a pure beta integral
    for (double s : {0.4, 1.0, 3.7}) {
        const double k = 0.5 * 4 + 0.5 * 2 - 2.0 + 1.0;
        const double direct = std::exp(log_gamma(k) + k * std::numbers::ln2 +
                                       log_beta(0.5 * 4 - 2.0 + 1.0, 0.5 * 2) -
                                       k * std::log(s));
        CHECK(marginal_numeric(0.0, s, hyper, cfg) ==
              doctest::Approx(direct).epsilon(1e-11));
    }
}

TEST_CASE("marginal ratio constancy across hyperparameter cells") {
    const QuadConfig cfg;
    Rng rng({7, 3});
    const std::vector<PriorHyper> cells = {
        {-2.0, {4, 2}}, {0.0, {3, 5}}, {1.0, {10, 10}}, {-1.3, {5, 3}}};
    for (const auto& hyper : cells) {
        std::vector<std::pair<double, double>> points;
        for (int i = 0; i < 20; ++i) {
            points.push_back({0.1 + 9.9 * rng.uniform(), 0.1 + 9.9 * rng.uniform()});
        }
        const auto check = marginal_check(points, hyper, cfg);
        REQUIRE(check.ratios.size() == 20);
        for (double r : check.ratios) CHECK(r > 0.0);
        CHECK(check.max_rel_spread <= 1e-6);
    }
}

TEST_CASE("completing the square identity") {
    Rng rng({13, 0});
    for (int i = 0; i < 300; ++i) {
        const double x = -5.0 + 10.0 * rng.uniform();
        const double theta = -5.0 + 10.0 * rng.uniform();
        const double lambda = 0.01 + 0.98 * rng.uniform();
        const double lhs = (x - theta) * (x - theta) +
                           lambda / (1.0 - lambda) * theta * theta;
        const double shifted = theta - (1.0 - lambda) * x;
        const double rhs = shifted * shifted / (1.0 - lambda) + lambda * x * x;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("beta change-of-variables identity") {
    Rng rng({19, 0});
    for (int i = 0; i < 60; ++i) {
        const double a = -0.5 + 3.0 * rng.uniform();
        const double b = -0.5 + 3.0 * rng.uniform();
        const double g = 0.5 + 4.0 * rng.uniform();
        const double w = 5.0 * rng.uniform();
        CHECK(beta_change_of_vars_gap(a, b, g, w, 256) <= 1e-10);
    }
    // degenerate w = 0 is exact
    CHECK(beta_change_of_vars_gap(1.0, 2.0, 3.0, 0.0, 64) <= 1e-14);
}

TEST_CASE("gradient identities vs finite differences") {
    const PriorHyper hyper{-2.0, {4, 2}};
    const auto [rel_x, rel_s] = gradient_identity_check(1.0, 1.0, hyper, 1e-5);
    CHECK(rel_x <= 1e-8);
    CHECK(rel_s <= 1e-8);

    // the s-coefficient at (1, 1) is -3/2 times m
    const double m = marginal_closed(1.0, 1.0, hyper);
    const double coef = 0.5 * 4 - 2.0 + 1.0;
    const double ds = -(coef / 2.0 + 1.0) * m;
    CHECK(ds == doctest::Approx(-1.5 * m).epsilon(1e-14));

    // near-zero x degenerates gracefully
    const auto [rel_x0, rel_s0] = gradient_identity_check(1e-10, 1.0, hyper, 1e-7);
    CHECK(rel_x0 <= 1e-4);
    CHECK(rel_s0 <= 1e-7);

    Rng rng({23, 0});
    for (const auto& h : {PriorHyper{0.0, {3, 5}}, PriorHyper{1.0, {10, 10}}}) {
        for (int i = 0; i < 5; ++i) {
            const double x_sq = 0.2 + 4.0 * rng.uniform();
            const double s = 0.2 + 4.0 * rng.uniform();
            const auto [rx, rs] = gradient_identity_check(x_sq, s, h, 1e-5);
            CHECK(rx <= 1e-8);
            CHECK(rs <= 1e-8);
        }
    }
}

TEST_CASE("posterior estimates reduce to the closed-form shrinkage") {
    const QuadConfig cfg;
    const PriorHyper hyper{-2.0, {4, 2}};  // alpha = 1
    const auto at_w1 = posterior_estimates_numeric(2.0, 2.0, hyper, cfg);
    CHECK(at_w1.shrink_closed == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(at_w1.sigma2_closed == doctest::Approx((2.0 / 3.0) * 2.0 / 2.0).epsilon(1e-15));
    CHECK(std::abs(at_w1.shrink_numeric - at_w1.shrink_closed) <= 1e-6);
    CHECK(std::abs(at_w1.sigma2_numeric - at_w1.sigma2_closed) <= 1e-6);

    // structural identity: sigma2 = shrink * s / n exactly in closed form
    Rng rng({29, 0});
    for (const auto& h : {PriorHyper{-2.0, {4, 2}}, PriorHyper{0.0, {3, 5}},
                          PriorHyper{1.0, {10, 10}}}) {
        for (int i = 0; i < 4; ++i) {
            const double x_sq = 0.3 + 4.0 * rng.uniform();
            const double s = 0.3 + 4.0 * rng.uniform();
            const auto pc = posterior_estimates_numeric(x_sq, s, h, cfg);
            CHECK(pc.sigma2_closed ==
                  doctest::Approx(pc.shrink_closed * s / h.dims.n).epsilon(1e-15));
            CHECK(std::abs(pc.shrink_numeric - pc.shrink_closed) <=
                  1e-5 * pc.shrink_closed);
            CHECK(std::abs(pc.sigma2_numeric - pc.sigma2_closed) <=
                  1e-5 * pc.sigma2_closed);
            CHECK(pc.shrink_numeric > 0.0);
            CHECK(pc.shrink_numeric < 1.0);
        }
    }

    // a near the boundary: alpha -> 0 means no shrinkage
    const PriorHyper near_flat{-2.999, {4, 2}};
    const auto flat = posterior_estimates_numeric(1.0, 1.0, near_flat, cfg);
    CHECK(flat.shrink_closed > 0.999);
}

TEST_CASE("hyperparameter domain") {
    CHECK_THROWS_AS((void)marginal_closed(1.0, 1.0, PriorHyper{-3.0, {4, 2}}),
                    std::domain_error);
    CHECK_THROWS_AS((void)marginal_numeric(1.0, 1.0, PriorHyper{-3.0, {4, 2}}, {}),
                    std::domain_error);
    CHECK_THROWS_AS((void)marginal_closed(1.0, 0.0, PriorHyper{-2.0, {4, 2}}),
                    std::domain_error);
}
