#pragma once

namespace varshrink {

// ln Gamma(x) for x > 0. Lanczos approximation, good to ~1e-14 relative.
// Throws std::domain_error for non-positive or non-finite x.
double log_gamma(double x);

// Digamma psi(x) = d/dx ln Gamma(x) for x > 0.
// Upward recurrence into the asymptotic (Bernoulli) series.
double digamma(double x);

// ln B(a, b) = log_gamma(a) + log_gamma(b) - log_gamma(a + b), a, b > 0.
double log_beta(double a, double b);

}  // namespace varshrink
