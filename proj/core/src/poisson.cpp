#include "varshrink/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace varshrink {

PoissonTruncation poisson_truncate(double rate, double tail_tol) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::domain_error("poisson_truncate: rate must be non-negative and finite");
    }
    if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
        throw std::domain_error("poisson_truncate: tail_tol must be in (0, 1)");
    }

    PoissonTruncation out;
    out.rate = rate;
    if (rate == 0.0) {
        out.weights = {1.0};
        return out;
    }

    // Term recurrence w_{j+1} = w_j * rate / (j + 1), kept as
    // mantissa * 2^shift so neither exp(-rate) nor rate^j can leave range.
    const double log2_w0 = -rate * std::numbers::log2e;
    long shift = static_cast<long>(std::floor(log2_w0));
    double mant = std::exp2(log2_w0 - static_cast<double>(shift));

    const long j_sanity =
        static_cast<long>(rate + 60.0 * std::sqrt(rate + 1.0) + 2000.0);
    const double target = 1.0 - tail_tol;
    double cumulative = 0.0;
    for (long j = 0; j <= j_sanity; ++j) {
        const double w = std::ldexp(mant, static_cast<int>(shift));
        out.weights.push_back(w);
        cumulative += w;
        if (cumulative >= target) break;

        mant *= rate / static_cast<double>(j + 1);
        if (mant > 0x1p500) {
            mant *= 0x1p-500;
            shift += 500;
        } else if (mant < 0x1p-500 && mant > 0.0) {
            mant *= 0x1p500;
            shift -= 500;
        }
    }
    out.j_max = static_cast<int>(out.weights.size()) - 1;
    out.tail_mass = std::max(0.0, 1.0 - cumulative);
    return out;
}

}  // namespace varshrink
