#include "betarma/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "betarma/special_math.hpp"
#include "parallel.hpp"

namespace barma {

namespace {

// One pseudo-sample: simulate from the fitted model and refit from fresh
// starting values; a failed refit gets one retry from a perturbed start.
bool bootstrap_replicate(const ModelOrder& order, LinkKind link, int n,
                         const ParamVector& estimate, RngStream rng,
                         const FitOptions& options, std::vector<double>& out) {
  RngStream sim_rng = rng.substream(0);
  const BoundedSeries ystar =
      simulate(order, estimate, link, n, default_burn_in(order), sim_rng);

  try {
    FitReport r = fit(order, link, ystar, options);
    if (r.converged) {
      out = r.estimate.flat();
      return true;
    }
  } catch (const std::exception&) {
  }

  // retry once from a perturbed start
  try {
    RngStream jitter = rng.substream(1);
    ParamVector start = starting_values(order, link, ystar);
    start.alpha += 0.1 * jitter.normal();
    for (double& c : start.ar) c += 0.1 * jitter.normal();
    for (double& c : start.ma) c += 0.1 * jitter.normal();
    start.precision *= std::exp(0.1 * jitter.normal());

    FitReport r = fit_from(order, link, ystar, start, options);
    if (r.converged) {
      out = r.estimate.flat();
      return true;
    }
  } catch (const std::exception&) {
  }
  return false;
}

}  // namespace

BootstrapResult run_bootstrap(const ModelOrder& order, LinkKind link,
                              const BoundedSeries& y, const FitReport& fit_report,
                              int B, RngStream rng) {
  if (B < 2 || B > 10000)
    throw std::invalid_argument("run_bootstrap: B must be in [2, 10000]");
  if (!fit_report.converged)
    throw std::invalid_argument("run_bootstrap: original fit did not converge");

  const int k = order.k();
  const int n = y.n();

  FitOptions refit_options;
  refit_options.compute_info_matrix = false;

  std::vector<std::vector<double>> slots(B);
  std::vector<char> ok(B, 0);

  detail::parallel_for(B, [&](int b) {
    ok[b] = bootstrap_replicate(order, link, n, fit_report.estimate,
                                rng.substream(static_cast<std::uint64_t>(b)),
                                refit_options, slots[b])
                ? 1
                : 0;
  });

  BootstrapResult result;
  result.order = order;
  result.series_n = n;
  result.requested_B = B;
  for (int b = 0; b < B; ++b) {
    if (ok[b])
      result.replicates.push_back(std::move(slots[b]));
    else
      ++result.n_failed;
  }
  if (result.n_failed > B / 2)
    throw std::runtime_error("run_bootstrap: more than half of the replicates failed (" +
                             std::to_string(result.n_failed) + "/" + std::to_string(B) + ")");

  const int eff = result.effective_B();
  result.mean_star.assign(k, 0.0);
  for (const auto& row : result.replicates)
    for (int r = 0; r < k; ++r) result.mean_star[r] += row[r];
  for (int r = 0; r < k; ++r) result.mean_star[r] /= eff;

  result.se_boot.assign(k, 0.0);
  for (const auto& row : result.replicates) {
    for (int r = 0; r < k; ++r) {
      const double d = row[r] - result.mean_star[r];
      result.se_boot[r] += d * d;
    }
  }
  for (int r = 0; r < k; ++r)
    result.se_boot[r] = std::sqrt(result.se_boot[r] / (eff - 1));

  result.corrected = bias_corrected(fit_report, result, &result.precision_floored);
  return result;
}

ParamVector bias_corrected(const FitReport& fit_report, const BootstrapResult& boot,
                           bool* floored) {
  const int k = boot.order.k();
  if (static_cast<int>(boot.mean_star.size()) != k)
    throw std::invalid_argument("bias_corrected: bootstrap result is empty");
  const std::vector<double> est = fit_report.estimate.flat();
  std::vector<double> corr(k);
  for (int r = 0; r < k; ++r) corr[r] = 2.0 * est[r] - boot.mean_star[r];

  bool did_floor = false;
  if (!(corr[k - 1] > 0.0)) {
    corr[k - 1] = std::numeric_limits<double>::min();
    did_floor = true;
  }
  if (floored) *floored = did_floor;
  return ParamVector::from_flat(corr, boot.order);
}

namespace {

std::vector<ConfidenceInterval> centered_intervals(const std::vector<double>& center,
                                                   const std::vector<double>& se,
                                                   double mult, double level, CiKind kind) {
  std::vector<ConfidenceInterval> out(center.size());
  for (std::size_t r = 0; r < center.size(); ++r)
    out[r] = {center[r] - mult * se[r], center[r] + mult * se[r], level, kind};
  return out;
}

void check_level(double level) {
  if (!(level > 0.5 && level < 1.0))
    throw std::invalid_argument("confidence level must be in (0.5, 1)");
}

}  // namespace

std::vector<ConfidenceInterval> ci_boot_se(const FitReport& fit_report,
                                           const BootstrapResult& boot, double level) {
  check_level(level);
  const double z = link(LinkKind::probit, 0.5 + 0.5 * level);
  return centered_intervals(fit_report.estimate.flat(), boot.se_boot, z, level,
                            CiKind::boot_se);
}

std::vector<ConfidenceInterval> ci_boot_t(const FitReport& fit_report,
                                          const BootstrapResult& boot, double level) {
  check_level(level);
  const int df = boot.series_n - boot.order.k();
  if (df <= 0)
    throw std::invalid_argument("ci_boot_t: nonpositive degrees of freedom n - k");
  const double t = student_t_quantile(0.5 + 0.5 * level, df);
  return centered_intervals(fit_report.estimate.flat(), boot.se_boot, t, level,
                            CiKind::boot_t);
}

std::vector<ConfidenceInterval> ci_percentile(const BootstrapResult& boot, double level) {
  check_level(level);
  const int B = boot.effective_B();
  const double a = 1.0 - level;
  if (B * a / 2.0 < 1.0)
    throw std::invalid_argument("ci_percentile: too few replicates for the level");

  const int k = boot.order.k();
  const int lo_rank = static_cast<int>(std::ceil(B * a / 2.0));          // 1-based
  const int hi_rank = static_cast<int>(std::ceil(B * (1.0 - a / 2.0)));  // 1-based

  std::vector<ConfidenceInterval> out(k);
  std::vector<double> col(B);
  for (int r = 0; r < k; ++r) {
    for (int b = 0; b < B; ++b) col[b] = boot.replicates[b][r];
    std::sort(col.begin(), col.end());
    out[r] = {col[lo_rank - 1], col[hi_rank - 1], level, CiKind::percentile};
  }
  return out;
}

std::vector<ConfidenceInterval> ci_unbiased_centered(const FitReport&,
                                                     const BootstrapResult& boot,
                                                     double level) {
  check_level(level);
  const double z = link(LinkKind::probit, 0.5 + 0.5 * level);
  return centered_intervals(boot.corrected.flat(), boot.se_boot, z, level,
                            CiKind::unbiased_centered);
}

}  // namespace barma
