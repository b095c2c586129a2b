#include "betarma/forecast.hpp"

#include <cmath>
#include <stdexcept>

namespace barma {

ForecastPath forecast(const ModelOrder& order, const ParamVector& params,
                      LinkKind link_kind, const BoundedSeries& y, const MeanPath& path,
                      int horizon) {
  order.validate();
  if (horizon < 1) throw std::invalid_argument("forecast: horizon must be >= 1");
  const int n = y.n();
  if (static_cast<int>(path.mu.size()) != n || static_cast<int>(path.resid.size()) != n)
    throw std::invalid_argument("forecast: mean path does not match the series");

  // g(y) for observed indices, g(mu_hat) for future ones.
  std::vector<double> g_obs(n);
  for (int t = 0; t < n; ++t) g_obs[t] = link(link_kind, y.values[t]);

  ForecastPath out;
  out.mu_hat.reserve(horizon);
  std::vector<double> g_future(horizon);

  for (int h = 1; h <= horizon; ++h) {
    double eta = params.alpha;
    for (int i = 1; i <= order.p; ++i) {
      // index n+h-i (1-based n+h, 0-based n+h-1-i+... ): observed when i >= h
      eta += params.ar[i - 1] * (i < h ? g_future[h - i - 1] : g_obs[n + h - i - 1]);
    }
    for (int j = 1; j <= order.q; ++j) {
      if (j < h) continue;  // future residuals are zero
      eta += params.ma[j - 1] * path.resid[n + h - j - 1];
    }
    const double mu = link_inv(link_kind, eta);
    g_future[h - 1] = link(link_kind, mu);
    out.mu_hat.push_back(mu);
  }
  return out;
}

ForecastAccuracy accuracy(std::span<const double> observed,
                          std::span<const double> predicted) {
  const std::size_t H = observed.size();
  if (H < 2 || predicted.size() != H)
    throw std::invalid_argument("accuracy: need matching windows of length >= 2");

  double mse = 0.0, abs_sum = 0.0, mape = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    const double e = observed[h] - predicted[h];
    mse += e * e;
    abs_sum += std::fabs(e);
    if (observed[h] == 0.0)
      throw std::invalid_argument("accuracy: zero observed value makes MAPE undefined");
    mape += std::fabs(e) / std::fabs(observed[h]);
  }
  mse /= H;
  mape /= H;

  double naive = 0.0;
  for (std::size_t h = 1; h < H; ++h) naive += std::fabs(observed[h] - observed[h - 1]);
  naive /= (H - 1);
  if (naive == 0.0)
    throw std::invalid_argument("accuracy: constant observed path makes MASE undefined");

  return {mse, mape, abs_sum / (H * naive)};
}

}  // namespace barma
