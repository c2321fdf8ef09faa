#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace varshrink {

// Gauss-Legendre rule mapped to (0, 1): nodes strictly increasing,
// weights positive and summing to 1.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int order() const { return static_cast<int>(nodes.size()); }
};

// Cached rule of the given order, 1 <= order <= 1024.
// Exact for polynomials of degree <= 2*order - 1.
const QuadRule& quad_rule(int order);

// integral_0^1 f(x) dx
template <class F>
double integrate(const QuadRule& rule, F&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(rule.nodes[i]);
    }
    return acc;
}

namespace detail {

// Endpoint exponents that are small and non-integer produce an algebraic
// singularity (in the integrand or its low derivatives) that plain
// Gauss-Legendre resolves poorly; those get a variable change below.
inline bool fractional_small(double e) {
    return e < 3.0 && std::abs(e - std::round(e)) > 1e-9;
}

// Substituting x = t^m turns an endpoint exponent e into m e + m - 1.
// Pick the smallest power in {1, 2, 4} that lands on a smooth exponent
// (half-integers need m = 2, other fractions m = 4).
inline int map_power(double e) {
    if (!fractional_small(e)) return 1;
    if (!fractional_small(2.0 * e + 1.0)) return 2;
    return 4;
}

// One endpoint-mapped pass over [lo, hi]:
//   side 0:  x = lo + (hi - lo) t^m   (resolves the x = lo end; lo must be 0
//            when p0 is singular there)
//   side 1:  x = 1 - ((1 - lo) - ... ) analogous from the right.
template <class F>
double power_weighted_pass(const QuadRule& rule, double p0, double p1,
                           double log_scale, F&& f, double lo, double hi,
                           int side, int m) {
    const std::size_t k = rule.nodes.size();
    const double mm = static_cast<double>(m);
    double acc = 0.0;
    if (m == 1) {
        const double span = hi - lo;
        for (std::size_t i = 0; i < k; ++i) {
            const double s = rule.nodes[i];
            const double x = lo + span * s;
            const double omx = span * (1.0 - s) + (1.0 - hi);
            const double lg = p0 * std::log(x) + p1 * std::log(omx) + log_scale;
            acc += rule.weights[i] * span * std::exp(lg) * f(x, omx);
        }
        return acc;
    }
    if (side == 0) {
        // x = hi t^m, requires lo == 0; dx = m hi t^{m-1} dt
        for (std::size_t i = 0; i < k; ++i) {
            const double t = rule.nodes[i];
            const double x = hi * std::pow(t, mm);
            double omx;
            if (hi == 1.0) {
                // 1 - t^m = (1-t)(1 + t + ... + t^{m-1}), stable near t = 1
                double geo = 1.0;
                double tp = 1.0;
                for (int r = 1; r < m; ++r) {
                    tp *= t;
                    geo += tp;
                }
                omx = (1.0 - t) * geo;
            } else {
                omx = 1.0 - x;
            }
            const double lg = p0 * std::log(x) + p1 * std::log(omx) + log_scale +
                              std::log(mm * hi) + (mm - 1.0) * std::log(t);
            acc += rule.weights[i] * std::exp(lg) * f(x, omx);
        }
        return acc;
    }
    // side == 1: 1 - x = (1 - lo) t^m, requires hi == 1
    const double span = 1.0 - lo;
    for (std::size_t i = 0; i < k; ++i) {
        const double t = rule.nodes[i];
        const double omx = span * std::pow(t, mm);
        const double lg = p0 * std::log1p(-omx) + p1 * std::log(omx) +
                          log_scale + std::log(mm * span) +
                          (mm - 1.0) * std::log(t);
        acc += rule.weights[i] * std::exp(lg) * f(1.0 - omx, omx);
    }
    return acc;
}

}  // namespace detail

// I = integral_lo^hi x^p0 (1-x)^p1 exp(log_scale) f(x, 1-x) dx
// with p0, p1 > -1 and [lo, hi] a subinterval of [0, 1].
//
// f receives both x and 1-x so callers near x = 1 keep full precision.
// Endpoints whose exponent is fractional and small get an x = t^m change
// of variable (m = 2 or 4) that lifts the exponent into smooth territory;
// when one exponent is so large that the weight collapses into a boundary
// layer beyond the rule's polynomial reach, that endpoint is mapped too.
// If both endpoints need a map the interval is split at 1/2 and each half
// is mapped one-sidedly.
template <class F>
double integrate_power_weighted(const QuadRule& rule, double p0, double p1,
                                double log_scale, F&& f, double lo = 0.0,
                                double hi = 1.0) {
    const bool at0 = (lo == 0.0);
    const bool at1 = (hi == 1.0);
    const double conc = 1.6 * rule.order();
    const bool concentrated = (p0 + p1 > conc);
    int m0 = at0 ? detail::map_power(p0) : 1;
    int m1 = at1 ? detail::map_power(p1) : 1;
    if (concentrated) {
        if (at0 && p1 >= p0) m0 = std::max(m0, 2);
        if (at1 && p0 > p1) m1 = std::max(m1, 2);
    }

    if (m0 > 1 && m1 > 1) {
        return detail::power_weighted_pass(rule, p0, p1, log_scale, f, 0.0, 0.5,
                                           0, m0) +
               detail::power_weighted_pass(rule, p0, p1, log_scale, f, 0.5, 1.0,
                                           1, m1);
    }
    if (m0 > 1) {
        return detail::power_weighted_pass(rule, p0, p1, log_scale, f, lo, hi,
                                           0, m0);
    }
    return detail::power_weighted_pass(rule, p0, p1, log_scale, f, lo, hi, 1, m1);
}

}  // namespace varshrink
