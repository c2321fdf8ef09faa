#include <cmath>
#include <numbers>

#include "doctest.h"
#include "varshrink/quadrature.hpp"
#include "varshrink/risk.hpp"
#include "varshrink/special_functions.hpp"

using namespace varshrink;

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

double delta0_risk_closed(int n) {
    return std::log(static_cast<double>(n)) - std::numbers::ln2 - digamma(0.5 * n);
}

}  // namespace

TEST_CASE("risk of delta_0 hits the digamma closed form and ignores tau") {
    const QuadConfig cfg;
    const auto d0 = EstimatorSpec::best_equivariant();
    for (int n : {1, 2, 3, 4, 5, 12, 30}) {
        const ProblemDims dims{4, n};
        for (double tau : {0.0, 1.0, 10.0, 100.0}) {
            const auto r = risk_exact(d0, dims, {tau}, cfg);
            CHECK(std::abs(r.value - delta0_risk_closed(n)) <= 1e-10);
        }
    }
    // n = 2 equals the Euler-Mascheroni constant
    const auto g = risk_exact(d0, {7, 2}, {3.0}, cfg);
    CHECK(g.value == doctest::Approx(kEulerGamma).epsilon(1e-12));
    // n = 4 equals ln 2 - (1 - gamma)
    const auto r4 = risk_exact(d0, {3, 4}, {0.5}, cfg);
    CHECK(r4.value ==
          doctest::Approx(std::numbers::ln2 - 1.0 + kEulerGamma).epsilon(1e-12));
}

TEST_CASE("hand-integrated anchor: Delta(alpha=1, p=4, n=2, tau=0)") {
    const QuadConfig cfg;
    const double want = 8.0 * std::numbers::ln2 - 5.5;
    const auto d = delta_risk(1.0, {4, 2}, {0.0}, cfg);
    CHECK(std::abs(d.value - want) <= 1e-10);
    CHECK(d.j_max_used == 0);

    // risk of the simple Bayes estimator at the same cell
    const auto r = risk_exact(EstimatorSpec::simple_bayes(1.0), {4, 2}, {0.0}, cfg);
    CHECK(std::abs(r.value - (kEulerGamma - want)) <= 1e-10);
}

TEST_CASE("delta_risk equals the difference of the risk engine outputs") {
    const QuadConfig cfg;
    for (double tau : {0.0, 2.0, 100.0}) {
        for (double alpha : {0.35, 1.0, 1.9}) {
            const ProblemDims dims{4, 2};
            const double direct = delta_risk(alpha, dims, {tau}, cfg).value;
            const double r0 =
                risk_exact(EstimatorSpec::best_equivariant(), dims, {tau}, cfg).value;
            const double r1 =
                risk_exact(EstimatorSpec::simple_bayes(alpha), dims, {tau}, cfg).value;
            CHECK(std::abs(direct - (r0 - r1)) <= 1e-8);
        }
    }
}

TEST_CASE("delta_risk vanishes with alpha and at huge noncentrality") {
    const QuadConfig cfg;
    CHECK(std::abs(delta_risk(1e-12, {4, 2}, {1.0}, cfg).value) <= 1e-11);
    for (const ProblemDims dims : {ProblemDims{1, 1}, ProblemDims{3, 5},
                                   ProblemDims{4, 2}, ProblemDims{10, 10}}) {
        const double star =
            (-(dims.n + 2.0) + std::sqrt((dims.n + 2.0) * (dims.n + 2.0) +
                                         16.0 * dims.p)) / (2.0 * dims.n);
        CHECK(std::abs(delta_risk(star, dims, {1e4}, cfg).value) <= 1e-2);
    }
}

TEST_CASE("doubling the quadrature order leaves smooth cells unchanged") {
    QuadConfig lo;
    QuadConfig hi;
    hi.order = 256;
    for (double tau : {0.0, 7.0}) {
        const double a = delta_risk(1.2, {3, 5}, {tau}, lo).value;
        const double b = delta_risk(1.2, {3, 5}, {tau}, hi).value;
        CHECK(std::abs(a - b) <= 1e-10);
        const double s1 =
            risk_exact(EstimatorSpec::stein_truncated(), {3, 5}, {tau}, lo).value;
        const double s2 =
            risk_exact(EstimatorSpec::stein_truncated(), {3, 5}, {tau}, hi).value;
        CHECK(std::abs(s1 - s2) <= 1e-10);
    }
}

TEST_CASE("E[ln(1-B)] digamma identity cross-check") {
    // The engine uses psi(b) - psi(a+b). Verify it by quadrature after the
    // substitution 1-x = t^4, which tames the logarithmic endpoint:
    //   E[ln(1-B)] = 16/B(a,b) int t^{4b-1} (1-t)^{a-1} g(t)^{a-1} ln t dt,
    //   g(t) = (1+t)(1+t^2).
    const QuadRule& rule = quad_rule(512);
    for (double a : {0.5, 2.0, 7.5}) {
        for (double b : {0.5, 1.0, 2.5}) {
            const double quad = integrate_power_weighted(
                rule, 4.0 * b - 1.0, a - 1.0,
                std::log(16.0) - log_beta(a, b), [a](double t, double) {
                    const double smooth = (1.0 + t) * (1.0 + t * t);
                    return std::pow(smooth, a - 1.0) * std::log(t);
                });
            CHECK(std::abs(quad - (digamma(b) - digamma(a + b))) <= 1e-8);
        }
    }
}

TEST_CASE("Monte Carlo agrees with closed forms and quadrature") {
    McConfig mc;
    mc.samples = 1000000;
    mc.seed = {42, 0};
    // delta_0, n = 2, tau = 5: risk is gamma
    const auto r = risk_mc(EstimatorSpec::best_equivariant(), {4, 2}, {5.0}, mc);
    CHECK(std::abs(r.value - kEulerGamma) <= 4.0 * r.error_bound);
    CHECK(r.method == RiskMethod::monte_carlo);
    CHECK(r.error_bound > 0.0);
    CHECK(r.error_bound < 5e-3);

    const auto r2 = risk_mc(EstimatorSpec::simple_bayes(1.0), {4, 2}, {0.0}, mc);
    const auto exact = risk_exact(EstimatorSpec::simple_bayes(1.0), {4, 2}, {0.0}, {});
    CHECK(std::abs(r2.value - exact.value) <=
          4.0 * (r2.error_bound + exact.error_bound));
}

TEST_CASE("Monte Carlo determinism and common random numbers") {
    McConfig mc;
    mc.samples = 20000;
    mc.seed = {99, 3};
    const auto a = risk_mc(EstimatorSpec::simple_bayes(1.0), {4, 2}, {2.0}, mc);
    const auto b = risk_mc(EstimatorSpec::simple_bayes(1.0), {4, 2}, {2.0}, mc);
    CHECK(a.value == b.value);
    CHECK(a.error_bound == b.error_bound);

    // with crn the same (J, U, V) stream drives both estimators, so the
    // sampling noise cancels out of the paired difference
    McConfig big;
    big.samples = 1000000;
    big.seed = {42, 11};
    const auto mc0 = risk_mc(EstimatorSpec::best_equivariant(), {4, 2}, {0.0}, big);
    const auto mc1 = risk_mc(EstimatorSpec::simple_bayes(1.0), {4, 2}, {0.0}, big);
    const double exact_delta = delta_risk(1.0, {4, 2}, {0.0}, {}).value;
    CHECK(std::abs((mc0.value - mc1.value) - exact_delta) <= 5e-4);

    // crn off reroutes the stream
    McConfig independent = mc;
    independent.crn = false;
    const auto c = risk_mc(EstimatorSpec::simple_bayes(1.0), {4, 2}, {2.0}, independent);
    CHECK(c.value != a.value);
}

TEST_CASE("truncation cap raises a structured error") {
    QuadConfig cfg;
    cfg.j_cap = 50;
    CHECK_THROWS_AS((void)delta_risk(1.0, {4, 2}, {1e4}, cfg), TruncationError);
    try {
        (void)risk_exact(EstimatorSpec::best_equivariant(), {4, 2}, {1e4}, cfg);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.j_cap() == 50);
        CHECK(e.j_needed() > 50);
        CHECK(e.mass_reached() < 1.0);
    }
}

TEST_CASE("config validation") {
    QuadConfig bad_order;
    bad_order.order = 8;
    CHECK_THROWS_AS((void)risk_exact(EstimatorSpec::best_equivariant(), {4, 2},
                                     {0.0}, bad_order),
                    std::invalid_argument);
    QuadConfig bad_tol;
    bad_tol.tail_tol = 1e-6;
    CHECK_THROWS_AS((void)delta_risk(1.0, {4, 2}, {0.0}, bad_tol),
                    std::invalid_argument);
    McConfig bad_mc;
    bad_mc.samples = 10;
    CHECK_THROWS_AS((void)risk_mc(EstimatorSpec::best_equivariant(), {4, 2},
                                  {0.0}, bad_mc),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)delta_risk(-1.0, {4, 2}, {0.0}, QuadConfig{}),
                    std::domain_error);
    CHECK_THROWS_AS((void)risk_exact(EstimatorSpec::best_equivariant(), {4, 2},
                                     {-0.5}, QuadConfig{}),
                    std::domain_error);
}

TEST_CASE("error bound fields are populated") {
    const auto r = risk_exact(EstimatorSpec::simple_bayes(0.8), {4, 2}, {30.0}, {});
    CHECK(r.error_bound >= 0.0);
    CHECK(r.error_bound < 1e-10);
    CHECK(r.j_max_used > 10);
    CHECK(r.method == RiskMethod::quadrature);
}
