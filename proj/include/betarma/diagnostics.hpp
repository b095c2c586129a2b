#pragma once

#include <span>
#include <vector>

#include "betarma/estimation.hpp"

namespace barma {

/// Residuals scaled by the fitted conditional standard deviation
/// sqrt(mu(1-mu)/(1+phi)), one value per in-sample index t > m.
std::vector<double> standardized_residuals(const FitReport& fit, const MeanPath& path);

/// Sample autocorrelations at lags 1..max_lag. A constant series raises.
std::vector<double> sample_acf(std::span<const double> x, int max_lag);

/// Sample partial autocorrelations via Durbin-Levinson on sample_acf.
std::vector<double> sample_pacf(std::span<const double> x, int max_lag);

/// AIC = -2 loglik + 2k.
double aic_of(const FitReport& fit);

struct OrderSearchCell {
  int p = 0;
  int q = 0;
  double aic = 0.0;  // NaN when the cell did not converge
  bool converged = false;
};

struct OrderSearchResult {
  std::vector<OrderSearchCell> grid;  // row-major over (p, q), (0,0) excluded
  ModelOrder best;
  FitReport best_fit;
};

/// Exhaustive AIC search over 0 <= p <= p_max, 0 <= q <= q_max excluding
/// (0,0). Ties break toward smaller p+q, then smaller q. Throws when no
/// cell converges.
OrderSearchResult select_order(LinkKind link, const BoundedSeries& y,
                               int p_max, int q_max, const FitOptions& options = {});

}  // namespace barma
