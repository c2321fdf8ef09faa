#pragma once

#include <span>
#include <vector>

namespace varshrink {

// Sampling model: X ~ N_p(theta, sigma^2 I_p), S/sigma^2 ~ chi^2_n,
// X and S independent.
struct ProblemDims {
    int p = 1;  // dimension of X
    int n = 1;  // degrees of freedom of S
};

void check_dims(const ProblemDims& dims);

// tau = |theta|^2 / sigma^2, the only functional of (theta, sigma^2) the
// risk of a scale-equivariant estimator depends on.
struct Noncentrality {
    double tau = 0.0;
};

void check_tau(const Noncentrality& tau);

// The scale-equivariant family delta_phi = (1 - phi(W)) S/n, W = |X|^2/S.
enum class EstimatorFamily {
    best_equivariant,   // phi = 0, i.e. delta_0 = S/n
    stein_truncated,    // phi(w) = max(0, (p - n w)/(p + n))
    simple_bayes,       // phi(w) = alpha/(alpha + 1 + w)
};

struct EstimatorSpec {
    EstimatorFamily family = EstimatorFamily::best_equivariant;
    double alpha = 0.0;  // used only by simple_bayes; must be > 0 there

    static EstimatorSpec best_equivariant();
    static EstimatorSpec stein_truncated();
    static EstimatorSpec simple_bayes(double alpha);
};

// Hyperparameter of the hierarchical shrinkage prior. Requires
// p/2 + a + 1 > 0 so the marginal converges and the induced alpha is
// positive.
struct PriorHyper {
    double a = 0.0;
    ProblemDims dims;
};

void check_hyper(const PriorHyper& hyper);

// Entropy (Stein) loss: delta/sigma2 - ln(delta/sigma2) - 1.
double entropy_loss(double delta, double sigma2);

// Shrinkage function phi(w) of the family, in [0, 1).
double phi_of(const EstimatorSpec& spec, double w, const ProblemDims& dims);

// Variance estimate (1 - phi(x_sq/s)) * s/n.
double estimate_variance(const EstimatorSpec& spec, double x_sq, double s,
                         const ProblemDims& dims);

// Mean estimate (1 - alpha/(alpha + 1 + |x|^2/s)) x.
std::vector<double> estimate_mean(std::span<const double> x, double s, double alpha);

// alpha induced by the prior: (p/2 + a + 1)/(n/2).
double alpha_from_hyper(const PriorHyper& hyper);

}  // namespace varshrink
