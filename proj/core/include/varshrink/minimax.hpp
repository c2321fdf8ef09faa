#pragma once

#include <span>
#include <vector>

#include "varshrink/risk.hpp"

namespace varshrink {

enum class DominanceVerdict { dominates, violation, inconclusive };

struct ScanCell {
    double tau = 0.0;
    double delta = 0.0;        // NaN when the cell failed to evaluate
    double error_bound = 0.0;
    bool ok = true;
};

// Tabulated dominance scan over a noncentrality grid.
// verdict = dominates   iff every cell evaluated and min_delta >= -violation_tol
// verdict = violation   iff some cell has delta < -(violation_tol + its error bound)
// verdict = inconclusive otherwise (borderline deficit or failed cells).
struct ScanReport {
    std::vector<ScanCell> cells;
    double min_delta = 0.0;
    double argmin_tau = 0.0;
    DominanceVerdict verdict = DominanceVerdict::inconclusive;
    double violation_tol = 1e-8;
};

enum class AuditStep { log_bound, monotone, kj_sign, kj_moment, final_ineq };

// One numerically audited proof step. passed iff worst_margin >= -1e-12.
struct ProofAudit {
    AuditStep step;
    bool passed = false;
    double worst_margin = 0.0;
    std::vector<double> witness;  // inputs at the worst margin
};

// Closed-form dominance threshold (-(n+2) + sqrt((n+2)^2 + 16 p)) / (2n).
double alpha_star(const ProblemDims& dims);

// The same threshold via its max-min representation
// max over kappa in (0,1) of min(1/kappa - 1, 4 p kappa / (n(n + 2 kappa))),
// located by bisecting the crossing of the two curves to opt_tol.
double alpha_star_maxmin(const ProblemDims& dims, double opt_tol);

// Default noncentrality grid for dominance scans.
const std::vector<double>& default_tau_grid();

// Evaluates delta_risk over the grid and classifies the result.
// tau_grid must be non-empty and sorted ascending. Truncation failures in
// the risk engine become failed (inconclusive) cells.
ScanReport dominance_scan(double alpha, const ProblemDims& dims,
                          std::span<const double> tau_grid,
                          const QuadConfig& cfg, double violation_tol);

// k_j(w) = (1+w)^{-eps} ((p + n + 2j - alpha n/2)/(1+w) - n), eps = 1/(1+alpha).
// Equals p + 2j - alpha n/2 at w = 0.
double kj_value(int j, double w, double alpha, const ProblemDims& dims);

// The single sign change of k_j: w* = (p + 2j - alpha n/2)/n, cross-checked
// by bisection to root_tol. Requires k_j(0) > 0.
double kj_root(int j, double alpha, const ProblemDims& dims, double root_tol);

// E[k_j(W_j)] with W_j = U_j/V, via the beta-moment closed form
// (m_j - alpha n/2) B(p/2+j, n/2+eps+1)/B(p/2+j, n/2)
//   - n B(p/2+j, n/2+eps)/B(p/2+j, n/2).
double kj_moment(int j, double alpha, const ProblemDims& dims);

// Same expectation by direct quadrature (independent route).
double kj_moment_quad(int j, double alpha, const ProblemDims& dims,
                      const QuadConfig& cfg);

// The closed form without the 1/B(p/2+j, n/2) normalizer, i.e. up to that
// positive common factor.
double kj_moment_unnormalized(int j, double alpha, const ProblemDims& dims);

// d/dw log[(1+w)^eps / (alpha+1+w)] = -w(1-eps)/((1+w)(alpha+1+w)).
double monotone_derivative(double alpha, double w);

// log(1-x) >= -x - x^2/(2(1-x)) on (0,1); margin = lhs - rhs at each point.
ProofAudit audit_log_bound(std::span<const double> x_grid);

// Non-positivity of monotone_derivative over the grid, with the analytic
// derivative checked against centered finite differences within 1e-6.
ProofAudit audit_monotone(double alpha, std::span<const double> w_grid);

// Random (j, alpha, p, n) configurations with k_j(0) > 0: sign is + below
// w* and - above it, on grids spanning (0, 100 w*].
ProofAudit audit_kj_sign(std::size_t configs, std::size_t grid_points,
                         const SeedSpec& seed);

// Non-negativity of E[k_j(W_j)] for j in [j_lo, j_hi] plus agreement of the
// closed form with quadrature within 1e-10.
ProofAudit audit_kj_moment(double alpha, const ProblemDims& dims, int j_lo,
                           int j_hi, const QuadConfig& cfg);

// Margin 4p/(n(n(alpha+1)+2)) - alpha, which is >= 0 exactly when
// alpha <= alpha_star. Also asserts tightness: the margin is strictly
// negative just above the threshold.
ProofAudit audit_final_inequality(double alpha, const ProblemDims& dims);

}  // namespace varshrink
