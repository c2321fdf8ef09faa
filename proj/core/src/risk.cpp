#include "varshrink/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>

#include "varshrink/poisson.hpp"
#include "varshrink/quadrature.hpp"
#include "varshrink/special_functions.hpp"

namespace varshrink {

void check_quad_config(const QuadConfig& cfg) {
    if (cfg.order < 16) {
        throw std::invalid_argument("QuadConfig: order must be >= 16");
    }
    if (!(cfg.tail_tol > 0.0) || !(cfg.tail_tol <= 1e-8)) {
        throw std::invalid_argument("QuadConfig: tail_tol must be in (0, 1e-8]");
    }
    if (cfg.j_cap < 50) {
        throw std::invalid_argument("QuadConfig: j_cap must be >= 50");
    }
}

void check_mc_config(const McConfig& cfg) {
    if (cfg.samples < 1000) {
        throw std::invalid_argument("McConfig: samples must be >= 1000");
    }
}

TruncationError::TruncationError(int j_needed, int j_cap, double mass_reached)
    : std::runtime_error("Poisson mixture truncated: needs j_max = " +
                         std::to_string(j_needed) + " > j_cap = " +
                         std::to_string(j_cap) + " (mass reached " +
                         std::to_string(mass_reached) + ")"),
      j_needed_(j_needed),
      j_cap_(j_cap),
      mass_reached_(mass_reached) {}

namespace {

struct MixtureSum {
    double value;
    double error_bound;
    int j_max;
};

// Sum_j Pois(tau/2)(j) term(j), with the truncation bound
// tail_mass * (estimate of sup over dropped terms from the last one).
MixtureSum poisson_mixture(double tau, const QuadConfig& cfg,
                           const std::function<double(int)>& term) {
    const PoissonTruncation trunc = poisson_truncate(tau / 2.0, cfg.tail_tol);
    if (trunc.j_max > cfg.j_cap) {
        double mass = 0.0;
        for (int j = 0; j <= cfg.j_cap; ++j) mass += trunc.weights[j];
        throw TruncationError(trunc.j_max, cfg.j_cap, mass);
    }
    double value = 0.0;
    double last = 0.0;
    for (int j = 0; j <= trunc.j_max; ++j) {
        last = term(j);
        value += trunc.weights[j] * last;
    }
    const double sup_estimate = 2.0 * std::abs(last) + 1e-30;
    return {value, trunc.tail_mass * sup_estimate, trunc.j_max};
}

// E[(1 - phi(W))(1-B)] and E[ln(1 - phi(W))] for one mixture term.
// The Stein family is integrated piecewise around its kink at
// b = p/(p+n) (w = p/n); the other families are smooth on (0, 1).
struct PhiExpectations {
    double shrink_mean;  // E[(1 - phi)(1 - B)]
    double log_mean;     // E[ln(1 - phi)]
};

PhiExpectations phi_expectations(const EstimatorSpec& spec,
                                 const ProblemDims& dims, double shape1,
                                 double shape2, const QuadRule& rule) {
    const double neg_log_norm = -log_beta(shape1, shape2);
    switch (spec.family) {
        case EstimatorFamily::best_equivariant: {
            const double e1 =
                integrate_power_weighted(rule, shape1 - 1.0, shape2, neg_log_norm,
                                         [](double, double) { return 1.0; });
            return {e1, 0.0};
        }
        case EstimatorFamily::simple_bayes: {
            // 1 - phi(W) = 1/(1 + alpha (1-B)), stable in 1-B.
            const double alpha = spec.alpha;
            const double e1 = integrate_power_weighted(
                rule, shape1 - 1.0, shape2, neg_log_norm,
                [alpha](double, double omb) { return 1.0 / (1.0 + alpha * omb); });
            const double e2 = -integrate_power_weighted(
                rule, shape1 - 1.0, shape2 - 1.0, neg_log_norm,
                [alpha](double, double omb) { return std::log1p(alpha * omb); });
            return {e1, e2};
        }
        case EstimatorFamily::stein_truncated: {
            // On [0, b*]: 1 - phi = n/((p+n)(1-B)); on [b*, 1]: phi = 0.
            const double p = dims.p;
            const double n = dims.n;
            const double kink = p / (p + n);
            const double ratio = n / (p + n);
            const double e1_lo = integrate_power_weighted(
                rule, shape1 - 1.0, shape2 - 1.0, neg_log_norm,
                [ratio](double, double) { return ratio; }, 0.0, kink);
            const double e1_hi = integrate_power_weighted(
                rule, shape1 - 1.0, shape2, neg_log_norm,
                [](double, double) { return 1.0; }, kink, 1.0);
            const double log_ratio = std::log(ratio);
            const double e2_lo = integrate_power_weighted(
                rule, shape1 - 1.0, shape2 - 1.0, neg_log_norm,
                [log_ratio](double, double omb) {
                    return log_ratio - std::log(omb);
                },
                0.0, kink);
            return {e1_lo + e1_hi, e2_lo};
        }
    }
    throw std::logic_error("phi_expectations: unknown estimator family");
}

}  // namespace

RiskEstimate risk_exact(const EstimatorSpec& spec, const ProblemDims& dims,
                        const Noncentrality& tau, const QuadConfig& cfg) {
    check_dims(dims);
    check_tau(tau);
    check_quad_config(cfg);

    const QuadRule& rule = quad_rule(cfg.order);
    const double n = dims.n;
    const double shape2 = 0.5 * n;
    const double tau_free =
        std::log(n) - std::numbers::ln2 - digamma(shape2) - 1.0;

    const auto term = [&](int j) {
        const double shape1 = 0.5 * (dims.p + 2.0 * j);
        const double m_j = dims.p + n + 2.0 * j;
        const PhiExpectations e = phi_expectations(spec, dims, shape1, shape2, rule);
        return (m_j / n) * e.shrink_mean - e.log_mean + tau_free;
    };

    const MixtureSum sum = poisson_mixture(tau.tau, cfg, term);
    return {sum.value, sum.error_bound, RiskMethod::quadrature, sum.j_max};
}

RiskEstimate risk_mc(const EstimatorSpec& spec, const ProblemDims& dims,
                     const Noncentrality& tau, const McConfig& cfg) {
    check_dims(dims);
    check_tau(tau);
    check_mc_config(cfg);

    SeedSpec effective = cfg.seed;
    if (!cfg.crn) {
        // Distinct stream per estimator spec.
        std::uint64_t salt = static_cast<std::uint64_t>(spec.family) + 1;
        if (spec.family == EstimatorFamily::simple_bayes) {
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(spec.alpha));
            std::memcpy(&bits, &spec.alpha, sizeof(bits));
            salt = splitmix64(salt ^ bits);
        }
        effective.stream_index = splitmix64(effective.stream_index ^ salt);
    }

    Rng rng(effective);
    const double rate = tau.tau / 2.0;
    const double n = dims.n;
    long j_max_seen = 0;

    // Welford accumulation of the loss samples.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const long j = rng.poisson(rate);
        j_max_seen = std::max(j_max_seen, j);
        const double u = rng.chi_square(dims.p + 2.0 * j);
        const double v = rng.chi_square(n);
        const double r = (1.0 - phi_of(spec, u / v, dims)) * v / n;
        const double loss = r - std::log(r) - 1.0;
        const double delta = loss - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (loss - mean);
    }
    const double count = static_cast<double>(cfg.samples);
    const double se = std::sqrt(m2 / (count * (count - 1.0)));
    return {mean, se, RiskMethod::monte_carlo, static_cast<int>(j_max_seen)};
}

RiskEstimate delta_risk(double alpha, const ProblemDims& dims,
                        const Noncentrality& tau, const QuadConfig& cfg) {
    check_dims(dims);
    check_tau(tau);
    check_quad_config(cfg);
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::domain_error("delta_risk: alpha must be positive and finite");
    }

    const QuadRule& rule = quad_rule(cfg.order);
    const double n = dims.n;
    const double shape2 = 0.5 * n;

    const auto term = [&](int j) {
        const double shape1 = 0.5 * (dims.p + 2.0 * j);
        const double m_j = dims.p + n + 2.0 * j;
        const double neg_log_norm = -log_beta(shape1, shape2);
        // alpha + 1 + W reduces to (1 + alpha(1-B))/(1-B).
        const double e_ratio = integrate_power_weighted(
            rule, shape1 - 1.0, shape2 + 1.0, neg_log_norm,
            [alpha](double, double omb) { return 1.0 / (1.0 + alpha * omb); });
        const double e_log = integrate_power_weighted(
            rule, shape1 - 1.0, shape2 - 1.0, neg_log_norm,
            [alpha](double, double omb) { return std::log1p(alpha * omb); });
        return (alpha / n) * m_j * e_ratio - e_log;
    };

    const MixtureSum sum = poisson_mixture(tau.tau, cfg, term);
    return {sum.value, sum.error_bound, RiskMethod::quadrature, sum.j_max};
}

}  // namespace varshrink
