#include "varshrink/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace varshrink {

namespace {

void require_positive(double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::domain_error(std::string(who) + ": argument must be positive and finite");
    }
}

}  // namespace

double log_gamma(double x) {
    require_positive(x, "log_gamma");

    // Lanczos, g = 671/128, 14 coefficients. Valid for all x > 0.
    static constexpr double kCof[14] = {
        57.1562356658629235,     -59.5979603554754912,
        14.1360979747417471,     -0.491913816097620199,
        0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3,
        -0.210264441724104883e-3, 0.217439618115212643e-3,
        -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};

    double y = x;
    double tmp = x + 5.24218750000000000;  // g + 1/2, g = 607/128
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : kCof) {
        ser += c / ++y;
    }
    return tmp + std::log(2.5066282746310005 * ser / x);
}

double digamma(double x) {
    require_positive(x, "digamma");

    // psi(x) = psi(x + 1) - 1/x, applied until the asymptotic series converges.
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }

    // ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
    const double inv2 = 1.0 / (x * x);
    double series = inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                    inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 -
                    inv2 * (1.0 / 132.0 -
                    inv2 * (691.0 / 32760.0 -
                    inv2 * (1.0 / 12.0)))))));
    return result + std::log(x) - 0.5 / x - series;
}

double log_beta(double a, double b) {
    require_positive(a, "log_beta");
    require_positive(b, "log_beta");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

}  // namespace varshrink
