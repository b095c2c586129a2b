#pragma once

#include <vector>

#include "betarma/model.hpp"

namespace barma {

struct FitOptions {
  double grad_tol = 1e-6;      // scaled by (1 + |loglik|), sup-norm
  double step_tol = 1e-9;      // sup-norm of the parameter step
  int max_iterations = 500;
  double hessian_step = 1e-4;  // scaled by (1 + |coordinate|)
  bool compute_info_matrix = true;
};

struct FitReport {
  ModelOrder order;
  LinkKind link = LinkKind::logit;
  ParamVector estimate;
  double loglik = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Sup-norm of the gradient in optimizer coordinates (precision on the log
  /// scale) at the returned point.
  double grad_norm = 0.0;
  /// k x k row-major estimate of the information matrix: the negated
  /// central-difference Hessian of cond_loglik at the optimum, symmetrized.
  std::vector<double> info_matrix;
  /// Inverse of info_matrix exists with a positive diagonal.
  bool info_ok = false;
  /// Starting values fell back to the intercept-only recipe (singular OLS).
  bool start_fallback = false;
};

enum class CiKind { asymptotic, boot_se, boot_t, percentile, unbiased_centered };

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  CiKind kind = CiKind::asymptotic;
};

/// OLS starting values for (alpha, ar) from the lagged-link regression,
/// zero MA start, and the beta-regression precision recipe (floored at 0.1).
/// A singular regression falls back to alpha = g(mean), zero slopes; the
/// fallback is reported through ols_singular when non-null.
ParamVector starting_values(const ModelOrder& order, LinkKind link,
                            const BoundedSeries& y, bool* ols_singular = nullptr);

/// Conditional MLE by BFGS on (alpha, ar, ma, log precision) with a Wolfe
/// line search and analytic gradients. Non-convergence is reported in the
/// result, not thrown; a non-finite likelihood at the start throws.
FitReport fit(const ModelOrder& order, LinkKind link, const BoundedSeries& y,
              const FitOptions& options = {});

/// Same optimizer started from a caller-supplied point.
FitReport fit_from(const ModelOrder& order, LinkKind link, const BoundedSeries& y,
                   const ParamVector& start, const FitOptions& options = {});

/// Per-coordinate intervals est_r +/- z_{1-a/2} sqrt([K^{-1}]_rr).
/// Throws when the information matrix is singular, naming the coordinates.
std::vector<ConfidenceInterval> asymptotic_ci(const FitReport& report, double level);

}  // namespace barma
