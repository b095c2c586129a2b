#pragma once

#include <vector>

#include "betarma/estimation.hpp"

namespace barma {

/// Replicate matrix and the statistics derived from it. All aggregates use
/// the converged subset of refits; its size is effective_B().
struct BootstrapResult {
  ModelOrder order;
  int series_n = 0;    // original sample size; the t interval uses n - k df
  int requested_B = 0;
  int n_failed = 0;    // refits dropped after one perturbed retry
  /// Converged replicate estimates, rows in ParamVector layout.
  std::vector<std::vector<double>> replicates;
  std::vector<double> mean_star;  // columnwise mean of replicates
  ParamVector corrected;          // 2 * estimate - mean_star
  bool precision_floored = false;
  std::vector<double> se_boot;    // sqrt(sum (rep - mean)^2 / (B-1))

  int effective_B() const { return static_cast<int>(replicates.size()); }
};

/// Parametric bootstrap: simulate B series of length n from the fitted model
/// (replicate b on substream (rng, b)), refit each with fresh starting
/// values, and aggregate. Throws when more than half the refits fail or when
/// B is outside [2, 10000].
BootstrapResult run_bootstrap(const ModelOrder& order, LinkKind link,
                              const BoundedSeries& y, const FitReport& fit,
                              int B, RngStream rng);

/// Second-order corrected estimator 2*estimate - mean_star; the precision
/// coordinate is floored at the smallest positive normal double (reported
/// through floored when non-null).
ParamVector bias_corrected(const FitReport& fit, const BootstrapResult& boot,
                           bool* floored = nullptr);

/// estimate +/- z * se_boot.
std::vector<ConfidenceInterval> ci_boot_se(const FitReport& fit,
                                           const BootstrapResult& boot, double level);

/// estimate +/- t_{n-k} * se_boot.
std::vector<ConfidenceInterval> ci_boot_t(const FitReport& fit,
                                          const BootstrapResult& boot, double level);

/// Order-statistic interval: ranks ceil(B a/2) and ceil(B (1-a/2)), 1-based.
std::vector<ConfidenceInterval> ci_percentile(const BootstrapResult& boot, double level);

/// ci_boot_se recentered at the bias-corrected estimate.
std::vector<ConfidenceInterval> ci_unbiased_centered(const FitReport& fit,
                                                     const BootstrapResult& boot,
                                                     double level);

}  // namespace barma
