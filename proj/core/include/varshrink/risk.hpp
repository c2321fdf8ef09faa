#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "varshrink/model.hpp"
#include "varshrink/sampling.hpp"

namespace varshrink {

enum class RiskMethod { quadrature, monte_carlo };

// A risk (or risk-difference) value with its error metadata.
// For quadrature, error_bound covers the Poisson tail truncation;
// for Monte Carlo it is the sample standard error of the mean.
struct RiskEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    RiskMethod method = RiskMethod::quadrature;
    int j_max_used = 0;
};

struct QuadConfig {
    int order = 128;          // quadrature points, >= 16
    double tail_tol = 1e-12;  // Poisson truncation, in (0, 1e-8]
    int j_cap = 20000;        // hard cap on mixture terms, >= 50
};

void check_quad_config(const QuadConfig& cfg);

struct McConfig {
    std::size_t samples = 1000000;  // >= 1000
    SeedSpec seed;
    bool crn = true;  // common random numbers across estimator specs
};

void check_mc_config(const McConfig& cfg);

// The Poisson mixture could not reach tail_tol within j_cap terms.
class TruncationError : public std::runtime_error {
  public:
    TruncationError(int j_needed, int j_cap, double mass_reached);

    int j_needed() const { return j_needed_; }
    int j_cap() const { return j_cap_; }
    double mass_reached() const { return mass_reached_; }

  private:
    int j_needed_;
    int j_cap_;
    double mass_reached_;
};

// Frequentist risk R(theta, sigma^2, delta_phi) under entropy loss,
// evaluated by one-dimensional beta quadrature per Poisson mixture term:
// conditional on J = j, B = U/(U+V) ~ Beta((p+2j)/2, n/2) is independent of
// T = U + V ~ chi^2_{p+n+2j}, so with m_j = p + n + 2j
//   R_j = (m_j/n) E[(1-phi(B/(1-B)))(1-B)] - E[ln(1-phi(B/(1-B)))]
//         - psi(n/2) - ln 2 + ln n - 1,
// using E[ln V] = E[ln(1-B)] + E[ln T] = psi(n/2) + ln 2.
RiskEstimate risk_exact(const EstimatorSpec& spec, const ProblemDims& dims,
                        const Noncentrality& tau, const QuadConfig& cfg);

// Monte Carlo oracle: samples J ~ Poisson(tau/2), U ~ chi^2_{p+2J},
// V ~ chi^2_n and averages the loss of (1 - phi(U/V)) V/n against
// sigma^2 = 1. With crn = true the (J, U, V) stream depends only on the
// SeedSpec, so it is shared across estimator specs.
RiskEstimate risk_mc(const EstimatorSpec& spec, const ProblemDims& dims,
                     const Noncentrality& tau, const McConfig& cfg);

// Risk difference Delta = R(delta_0) - R(simple Bayes alpha), computed
// directly from its reduced form: per mixture term,
//   Delta_j = (alpha/n) m_j E[(1-B)^2/(1 + alpha(1-B))]
//             - E[ln(1 + alpha(1-B))].
RiskEstimate delta_risk(double alpha, const ProblemDims& dims,
                        const Noncentrality& tau, const QuadConfig& cfg);

}  // namespace varshrink
