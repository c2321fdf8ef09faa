#pragma once

#include <span>
#include <utility>
#include <vector>

#include "varshrink/risk.hpp"

namespace varshrink {

// Ratio of the numerically integrated marginal to its closed form over a
// set of (x_sq, s) points. For a correct closed form the ratio is the same
// constant everywhere; max_rel_spread = (max - min)/mean of the ratios.
struct MarginalCheck {
    std::vector<std::pair<double, double>> points;
    std::vector<double> ratios;
    double max_rel_spread = 0.0;
};

// Posterior-ratio estimators computed from the marginal and its finite
// differences, next to their closed-form shrinkage targets.
struct PosteriorCheck {
    double shrink_numeric = 0.0;
    double shrink_closed = 0.0;
    double sigma2_numeric = 0.0;
    double sigma2_closed = 0.0;
};

// Marginal m(x, s) with the mixing variable integrated numerically:
//   Gamma(p/2+n/2+a+1) 2^{p/2+n/2+a+1}
//     * integral_0^1 l^{p/2+a} (1-l)^{n/2-1} (l x_sq + s)^{-p/2-n/2-a-1} dl.
double marginal_numeric(double x_sq, double s, const PriorHyper& hyper,
                        const QuadConfig& cfg);

// Closed form
//   c / (s^{n/2} (x_sq + s)^{p/2+a+1}),
//   c = Gamma(p/2+n/2+a+1) 2^{p/2+n/2+a+1} B(p/2+a+1, n/2).
double marginal_closed(double x_sq, double s, const PriorHyper& hyper);

// Analytic gradient coefficients of the marginal,
//   grad_x m = -2(p/2+a+1)/(x_sq+s) m x,
//   d m/d s  = -((p/2+a+1)/(x_sq+s) + (n/2)/s) m,
// compared against centered finite differences of marginal_closed along
// |x| and s. Returns the two relative errors; Richardson extrapolation is
// applied if the plain central difference disagrees beyond 1e-9.
std::pair<double, double> gradient_identity_check(double x_sq, double s,
                                                  const PriorHyper& hyper,
                                                  double fd_step);

// theta_hat = x + grad_x m / (-2 dm/ds) and sigma2_hat = m / (-2 dm/ds),
// evaluated from marginal_numeric with central differences, against the
// closed targets 1 - alpha/(alpha+1+w) and (1 - alpha/(alpha+1+w)) s/n.
PosteriorCheck posterior_estimates_numeric(double x_sq, double s,
                                           const PriorHyper& hyper,
                                           const QuadConfig& cfg);

MarginalCheck marginal_check(std::span<const std::pair<double, double>> points,
                             const PriorHyper& hyper, const QuadConfig& cfg);

// Relative gap between the two sides of the beta change-of-variables
// identity (t = (1+w) l / (1 + w l)):
//   integral l^a (1-l)^b (1+w l)^{-g} dl
//     = (w+1)^{-(a+1)} integral t^a (1-t)^b (1 - t w/(w+1))^{-a-b+g-2} dt.
double beta_change_of_vars_gap(double a_exp, double b_exp, double g_exp,
                               double w, int order);

}  // namespace varshrink
