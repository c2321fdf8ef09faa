#pragma once

#include <vector>

namespace varshrink {

// Truncated Poisson(rate) pmf covering all but tail_mass of the distribution.
// weights[j] = exp(-rate) rate^j / j! for j = 0..j_max.
struct PoissonTruncation {
    double rate = 0.0;
    std::vector<double> weights;
    int j_max = 0;
    double tail_mass = 0.0;
};

// Smallest j_max whose cumulative mass reaches 1 - tail_tol.
// rate >= 0, 0 < tail_tol < 1.
PoissonTruncation poisson_truncate(double rate, double tail_tol);

}  // namespace varshrink
