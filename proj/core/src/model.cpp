#include "varshrink/model.hpp"

#include <cmath>
#include <stdexcept>

namespace varshrink {

void check_dims(const ProblemDims& dims) {
    if (dims.p < 1 || dims.n < 1) {
        throw std::domain_error("ProblemDims: p and n must be >= 1");
    }
}

void check_tau(const Noncentrality& tau) {
    if (!(tau.tau >= 0.0) || !std::isfinite(tau.tau)) {
        throw std::domain_error("Noncentrality: tau must be non-negative and finite");
    }
}

EstimatorSpec EstimatorSpec::best_equivariant() {
    return {EstimatorFamily::best_equivariant, 0.0};
}

EstimatorSpec EstimatorSpec::stein_truncated() {
    return {EstimatorFamily::stein_truncated, 0.0};
}

EstimatorSpec EstimatorSpec::simple_bayes(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("EstimatorSpec: simple Bayes alpha must be > 0");
    }
    return {EstimatorFamily::simple_bayes, alpha};
}

void check_hyper(const PriorHyper& hyper) {
    check_dims(hyper.dims);
    if (!std::isfinite(hyper.a) || !(0.5 * hyper.dims.p + hyper.a + 1.0 > 0.0)) {
        throw std::domain_error("PriorHyper: requires p/2 + a + 1 > 0");
    }
}

double entropy_loss(double delta, double sigma2) {
    if (!(delta > 0.0) || !(sigma2 > 0.0)) {
        throw std::domain_error("entropy_loss: delta and sigma2 must be positive");
    }
    const double r = delta / sigma2;
    return r - std::log(r) - 1.0;
}

double phi_of(const EstimatorSpec& spec, double w, const ProblemDims& dims) {
    check_dims(dims);
    if (!(w >= 0.0)) {
        throw std::domain_error("phi_of: w must be non-negative");
    }
    switch (spec.family) {
        case EstimatorFamily::best_equivariant:
            return 0.0;
        case EstimatorFamily::stein_truncated:
            return std::max(0.0, (dims.p - dims.n * w) / (dims.p + dims.n));
        case EstimatorFamily::simple_bayes:
            return spec.alpha / (spec.alpha + 1.0 + w);
    }
    throw std::logic_error("phi_of: unknown estimator family");
}

double estimate_variance(const EstimatorSpec& spec, double x_sq, double s,
                         const ProblemDims& dims) {
    if (!(s > 0.0)) {
        throw std::domain_error("estimate_variance: s must be positive");
    }
    if (!(x_sq >= 0.0)) {
        throw std::domain_error("estimate_variance: x_sq must be non-negative");
    }
    return (1.0 - phi_of(spec, x_sq / s, dims)) * s / dims.n;
}

std::vector<double> estimate_mean(std::span<const double> x, double s, double alpha) {
    if (!(s > 0.0)) {
        throw std::domain_error("estimate_mean: s must be positive");
    }
    if (!(alpha > 0.0)) {
        throw std::domain_error("estimate_mean: alpha must be positive");
    }
    double x_sq = 0.0;
    for (double xi : x) x_sq += xi * xi;
    const double factor = 1.0 - alpha / (alpha + 1.0 + x_sq / s);
    std::vector<double> out(x.begin(), x.end());
    for (auto& xi : out) xi *= factor;
    return out;
}

double alpha_from_hyper(const PriorHyper& hyper) {
    check_hyper(hyper);
    return (0.5 * hyper.dims.p + hyper.a + 1.0) / (0.5 * hyper.dims.n);
}

}  // namespace varshrink
