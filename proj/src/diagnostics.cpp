#include "betarma/diagnostics.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"

namespace barma {

std::vector<double> standardized_residuals(const FitReport& fit, const MeanPath& path) {
  const int n = static_cast<int>(path.mu.size());
  const int m = fit.order.m();
  const double phi = fit.estimate.precision;

  std::vector<double> out;
  out.reserve(n - m);
  for (int t = m; t < n; ++t) {
    const double mu = path.mu[t];
    const double sd = std::sqrt(mu * (1.0 - mu) / (1.0 + phi));
    out.push_back(path.resid[t] / sd);
  }
  return out;
}

std::vector<double> sample_acf(std::span<const double> x, int max_lag) {
  const int n = static_cast<int>(x.size());
  if (max_lag < 1) throw std::invalid_argument("sample_acf: max_lag must be >= 1");
  if (n <= max_lag)
    throw std::invalid_argument("sample_acf: series shorter than max_lag");

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;

  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);
  if (denom == 0.0) throw std::invalid_argument("sample_acf: constant series");
  assert(denom / denom == 1.0);  // lag-0 autocorrelation is 1 by construction

  std::vector<double> rho(max_lag);
  for (int lag = 1; lag <= max_lag; ++lag) {
    double num = 0.0;
    for (int t = lag; t < n; ++t) num += (x[t] - mean) * (x[t - lag] - mean);
    rho[lag - 1] = num / denom;
  }
  return rho;
}

std::vector<double> sample_pacf(std::span<const double> x, int max_lag) {
  const std::vector<double> rho = sample_acf(x, max_lag);

  // Durbin-Levinson; the PACF at lag l is the last coefficient of the
  // order-l Yule-Walker fit.
  std::vector<double> pacf(max_lag);
  std::vector<double> phi_prev(max_lag, 0.0), phi_cur(max_lag, 0.0);
  double v = 1.0;
  for (int l = 1; l <= max_lag; ++l) {
    double acc = rho[l - 1];
    for (int j = 1; j < l; ++j) acc -= phi_prev[j - 1] * rho[l - j - 1];
    const double a = acc / v;
    phi_cur[l - 1] = a;
    for (int j = 1; j < l; ++j)
      phi_cur[j - 1] = phi_prev[j - 1] - a * phi_prev[l - j - 1];
    v *= (1.0 - a * a);
    pacf[l - 1] = a;
    phi_prev = phi_cur;
    if (v <= 0.0) {
      // degenerate (perfectly predictable) series; remaining lags are 0
      for (int r = l; r < max_lag; ++r) pacf[r] = 0.0;
      break;
    }
  }
  return pacf;
}

double aic_of(const FitReport& fit) {
  return -2.0 * fit.loglik + 2.0 * fit.order.k();
}

OrderSearchResult select_order(LinkKind link, const BoundedSeries& y,
                               int p_max, int q_max, const FitOptions& options) {
  if (p_max < 0 || q_max < 0 || (p_max == 0 && q_max == 0))
    throw std::invalid_argument("select_order: grid must contain at least one order");

  struct Cell {
    int p, q;
    FitReport report;
    bool fitted = false;
  };
  std::vector<Cell> cells;
  for (int p = 0; p <= p_max; ++p)
    for (int q = 0; q <= q_max; ++q)
      if (p + q > 0) cells.push_back({p, q, {}, false});

  detail::parallel_for(static_cast<int>(cells.size()), [&](int i) {
    Cell& c = cells[i];
    try {
      c.report = fit(ModelOrder{c.p, c.q}, link, y, options);
      c.fitted = true;
    } catch (const std::exception&) {
      c.fitted = false;
    }
  });

  OrderSearchResult result;
  bool have_best = false;
  double best_aic = std::numeric_limits<double>::infinity();
  for (const Cell& c : cells) {
    OrderSearchCell row{c.p, c.q, std::numeric_limits<double>::quiet_NaN(), false};
    if (c.fitted && c.report.converged) {
      row.aic = aic_of(c.report);
      row.converged = true;
      // ties break toward parsimony: smaller p+q, then smaller q
      const bool better =
          row.aic < best_aic ||
          (row.aic == best_aic &&
           (c.p + c.q < result.best.p + result.best.q ||
            (c.p + c.q == result.best.p + result.best.q && c.q < result.best.q)));
      if (!have_best || better) {
        have_best = true;
        best_aic = row.aic;
        result.best = ModelOrder{c.p, c.q};
        result.best_fit = c.report;
      }
    }
    result.grid.push_back(row);
  }
  if (!have_best)
    throw std::runtime_error("select_order: no grid cell converged");
  return result;
}

}  // namespace barma
