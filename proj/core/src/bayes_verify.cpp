#include "varshrink/bayes_verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "varshrink/quadrature.hpp"
#include "varshrink/special_functions.hpp"

namespace varshrink {

namespace {

void check_point(double x_sq, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw std::domain_error("marginal: s must be positive and finite");
    }
    if (!(x_sq >= 0.0) || !std::isfinite(x_sq)) {
        throw std::domain_error("marginal: x_sq must be non-negative and finite");
    }
}

double centered(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// One Richardson step: error drops from O(h^2) to O(h^4).
double richardson(const std::function<double(double)>& f, double x, double h) {
    return (4.0 * centered(f, x, h / 2.0) - centered(f, x, h)) / 3.0;
}

}  // namespace

double marginal_numeric(double x_sq, double s, const PriorHyper& hyper,
                        const QuadConfig& cfg) {
    check_hyper(hyper);
    check_point(x_sq, s);
    check_quad_config(cfg);
    const double p = hyper.dims.p;
    const double n = hyper.dims.n;
    const double k = 0.5 * p + 0.5 * n + hyper.a + 1.0;
    const double log_pref = log_gamma(k) + k * std::numbers::ln2;
    return integrate_power_weighted(
        quad_rule(cfg.order), 0.5 * p + hyper.a, 0.5 * n - 1.0, log_pref,
        [x_sq, s, k](double lambda, double) {
            return std::pow(lambda * x_sq + s, -k);
        });
}

double marginal_closed(double x_sq, double s, const PriorHyper& hyper) {
    check_hyper(hyper);
    check_point(x_sq, s);
    const double p = hyper.dims.p;
    const double n = hyper.dims.n;
    const double k = 0.5 * p + 0.5 * n + hyper.a + 1.0;
    const double exponent = 0.5 * p + hyper.a + 1.0;
    const double log_c = log_gamma(k) + k * std::numbers::ln2 +
                         log_beta(exponent, 0.5 * n);
    return std::exp(log_c - 0.5 * n * std::log(s) - exponent * std::log(x_sq + s));
}

std::pair<double, double> gradient_identity_check(double x_sq, double s,
                                                  const PriorHyper& hyper,
                                                  double fd_step) {
    check_hyper(hyper);
    check_point(x_sq, s);
    if (!(fd_step > 0.0)) {
        throw std::invalid_argument("gradient_identity_check: fd_step must be positive");
    }
    const double coef = 0.5 * hyper.dims.p + hyper.a + 1.0;
    const double m = marginal_closed(x_sq, s, hyper);
    const double r = std::sqrt(x_sq);

    // Directional derivative along x/|x|: d/dr m(r^2, s).
    const auto along_r = [&](double rr) {
        return marginal_closed(rr * rr, s, hyper);
    };
    const double grad_x_analytic = -2.0 * coef / (x_sq + s) * m * r;
    const auto rel = [](double got, double want) {
        const double scale = std::max(std::abs(want), 1e-300);
        return std::abs(got - want) / scale;
    };
    double fd_x = centered(along_r, r, fd_step);
    double rel_x = rel(fd_x, grad_x_analytic);
    if (rel_x > 1e-9) {
        fd_x = richardson(along_r, r, fd_step);
        rel_x = rel(fd_x, grad_x_analytic);
    }

    const auto along_s = [&](double ss) {
        return marginal_closed(x_sq, ss, hyper);
    };
    const double ds_analytic =
        -(coef / (x_sq + s) + 0.5 * hyper.dims.n / s) * m;
    double fd_s = centered(along_s, s, fd_step);
    double rel_s = rel(fd_s, ds_analytic);
    if (rel_s > 1e-9) {
        fd_s = richardson(along_s, s, fd_step);
        rel_s = rel(fd_s, ds_analytic);
    }
    return {rel_x, rel_s};
}

PosteriorCheck posterior_estimates_numeric(double x_sq, double s,
                                           const PriorHyper& hyper,
                                           const QuadConfig& cfg) {
    check_hyper(hyper);
    check_point(x_sq, s);
    if (!(x_sq > 0.0)) {
        throw std::domain_error("posterior_estimates_numeric: x_sq must be positive");
    }

    const auto m_of = [&](double u, double ss) {
        return marginal_numeric(u, ss, hyper, cfg);
    };
    const double m0 = m_of(x_sq, s);
    const double h_u = 1e-5 * std::max(x_sq, 0.25 * s);
    const double h_s = 1e-5 * s;
    const double m_u = (m_of(x_sq + h_u, s) - m_of(std::max(x_sq - h_u, 0.5 * h_u), s)) /
                       (x_sq + h_u - std::max(x_sq - h_u, 0.5 * h_u));
    const double m_s = (m_of(x_sq, s + h_s) - m_of(x_sq, s - h_s)) / (2.0 * h_s);

    // With m = M(|x|^2, s): grad_x m = 2 x M_u, so
    // theta_hat = x (1 - M_u/M_s) and sigma2_hat = M/(-2 M_s).
    PosteriorCheck check;
    check.shrink_numeric = 1.0 - m_u / m_s;
    check.sigma2_numeric = m0 / (-2.0 * m_s);

    const double alpha = alpha_from_hyper(hyper);
    const double w = x_sq / s;
    check.shrink_closed = 1.0 - alpha / (alpha + 1.0 + w);
    check.sigma2_closed = check.shrink_closed * s / hyper.dims.n;
    return check;
}

MarginalCheck marginal_check(std::span<const std::pair<double, double>> points,
                             const PriorHyper& hyper, const QuadConfig& cfg) {
    if (points.empty()) {
        throw std::invalid_argument("marginal_check: needs at least one point");
    }
    MarginalCheck out;
    out.points.assign(points.begin(), points.end());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (const auto& [x_sq, s] : points) {
        const double ratio = marginal_numeric(x_sq, s, hyper, cfg) /
                             marginal_closed(x_sq, s, hyper);
        if (!(ratio > 0.0)) {
            throw std::runtime_error("marginal_check: non-positive marginal ratio");
        }
        out.ratios.push_back(ratio);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        sum += ratio;
    }
    out.max_rel_spread = (hi - lo) / (sum / static_cast<double>(points.size()));
    return out;
}

double beta_change_of_vars_gap(double a_exp, double b_exp, double g_exp,
                               double w, int order) {
    if (!(a_exp > -1.0) || !(b_exp > -1.0)) {
        throw std::domain_error("beta_change_of_vars_gap: exponents must exceed -1");
    }
    if (!(w >= 0.0)) {
        throw std::domain_error("beta_change_of_vars_gap: w must be >= 0");
    }
    const QuadRule& rule = quad_rule(order);
    const double direct = integrate_power_weighted(
        rule, a_exp, b_exp, 0.0,
        [w, g_exp](double l, double) { return std::pow(1.0 + w * l, -g_exp); });
    const double tilt = -a_exp - b_exp + g_exp - 2.0;
    const double frac = w / (w + 1.0);
    const double substituted =
        std::pow(w + 1.0, -(a_exp + 1.0)) *
        integrate_power_weighted(rule, a_exp, b_exp, 0.0,
                                 [frac, tilt](double t, double) {
                                     return std::pow(1.0 - frac * t, tilt);
                                 });
    return std::abs(direct - substituted) / std::abs(direct);
}

}  // namespace varshrink
