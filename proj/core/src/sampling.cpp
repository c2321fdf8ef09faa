#include "varshrink/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "varshrink/special_functions.hpp"

namespace varshrink {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(const SeedSpec& seed) {
    return splitmix64(splitmix64(seed.master_seed) ^ seed.stream_index);
}

double Rng::uniform() {
    // 53 significant bits, centered so 0 and 1 are unreachable.
    const std::uint64_t bits = gen_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw std::domain_error("Rng::gamma: shape must be positive and finite");
    }
    if (shape < 1.0) {
        // Boost to shape + 1, then scale back by U^{1/shape}.
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze.
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::chi_square(double df) {
    return 2.0 * gamma(df / 2.0);
}

long Rng::poisson(double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::domain_error("Rng::poisson: rate must be non-negative and finite");
    }
    if (rate == 0.0) return 0;
    if (rate < 30.0) {
        // Multiplicative inversion.
        const double limit = std::exp(-rate);
        long k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }
    // Hormann's PTRS transformed rejection.
    const double b = 0.931 + 2.53 * std::sqrt(rate);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_rate = std::log(rate);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + rate + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        if (lhs <= kf * log_rate - rate - log_gamma(kf + 1.0)) {
            return static_cast<long>(kf);
        }
    }
}

std::vector<double> sample_chi2(double df, const SeedSpec& seed, std::size_t count) {
    if (!(df > 0.0) || !std::isfinite(df)) {
        throw std::domain_error("sample_chi2: df must be positive and finite");
    }
    Rng rng(seed);
    std::vector<double> out(count);
    for (auto& v : out) v = rng.chi_square(df);
    return out;
}

}  // namespace varshrink
