#pragma once

#include <span>
#include <vector>

#include "betarma/model.hpp"

namespace barma {

/// Predicted conditional means for horizons 1..H, each in (0,1).
struct ForecastPath {
  std::vector<double> mu_hat;

  int horizon() const { return static_cast<int>(mu_hat.size()); }
};

/// Recursive h-step mean forecast. Unobserved AR inputs substitute the
/// linked predicted mean g(mu_hat); future residuals are zero and past
/// residuals come from the in-sample path.
ForecastPath forecast(const ModelOrder& order, const ParamVector& params,
                      LinkKind link, const BoundedSeries& y, const MeanPath& path,
                      int horizon);

struct ForecastAccuracy {
  double mse = 0.0;
  double mape = 0.0;
  double mase = 0.0;
};

/// MSE, MAPE and MASE over an evaluation window of H >= 2 points. The MASE
/// denominator is the mean absolute one-step difference of the observed
/// window, applied uniformly. Zero observations (MAPE) or a constant
/// observed path (MASE) raise.
ForecastAccuracy accuracy(std::span<const double> observed,
                          std::span<const double> predicted);

}  // namespace barma
