#include "varshrink/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace varshrink {

namespace {

// Newton iteration on the Legendre polynomial, then map (-1,1) -> (0,1).
// Long double throughout so the rounded nodes and weights carry the full
// double precision even at order 1024.
QuadRule build_rule(int k) {
    QuadRule rule;
    rule.nodes.resize(k);
    rule.weights.resize(k);

    const long double pi_l = 3.14159265358979323846L;
    const int m = (k + 1) / 2;
    for (int i = 0; i < m; ++i) {
        long double z = std::cos(pi_l * (i + 0.75L) / (k + 0.5L));
        long double pp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p1 = 1.0L;
            long double p2 = 0.0L;
            for (int j = 1; j <= k; ++j) {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2.0L * j - 1.0L) * z * p2 - (j - 1.0L) * p3) / j;
            }
            pp = k * (z * p1 - p2) / (z * z - 1.0L);
            const long double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs((double)(z - z1)) < 1e-18) break;
        }
        // z descends from +1 as i grows; node (1-z)/2 ascends from 0.
        rule.nodes[i] = static_cast<double>((1.0L - z) / 2.0L);
        rule.nodes[k - 1 - i] = static_cast<double>((1.0L + z) / 2.0L);
        const double w = static_cast<double>(1.0L / ((1.0L - z * z) * pp * pp));
        rule.weights[i] = w;
        rule.weights[k - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const QuadRule& quad_rule(int order) {
    if (order < 1 || order > 1024) {
        throw std::invalid_argument("quad_rule: order must be in [1, 1024]");
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const QuadRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[order];
    if (!slot) {
        slot = std::make_unique<const QuadRule>(build_rule(order));
    }
    return *slot;
}

}  // namespace varshrink
