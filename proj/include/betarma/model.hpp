#pragma once

#include <string>
#include <vector>

#include "betarma/links.hpp"
#include "betarma/rng.hpp"

namespace barma {

/// Orders (p, q) of the dynamic structure. m = max(p,q) observations are
/// conditioned on; k = p + q + 2 counts the constant and the precision.
struct ModelOrder {
  int p = 0;
  int q = 0;

  int m() const { return p > q ? p : q; }
  int k() const { return p + q + 2; }

  /// p,q >= 0 and p+q >= 1 (at least one dynamic term).
  void validate() const;
};

/// Parameter point, fixed layout (alpha, ar..., ma..., precision) for every
/// vector and matrix operation.
struct ParamVector {
  double alpha = 0.0;
  std::vector<double> ar;
  std::vector<double> ma;
  double precision = 1.0;

  int size() const { return static_cast<int>(2 + ar.size() + ma.size()); }
  std::vector<double> flat() const;
  static ParamVector from_flat(const std::vector<double>& v, const ModelOrder& order);
};

/// Name of coordinate r in the layout above: alpha, ar1..arp, ma1..maq,
/// precision.
std::string coord_name(const ModelOrder& order, int r);

/// Observed series, every value strictly inside (0,1).
struct BoundedSeries {
  std::vector<double> values;

  int n() const { return static_cast<int>(values.size()); }

  /// Validating constructor; throws listing the first offending index.
  static BoundedSeries from_values(std::vector<double> v);
};

/// In-sample conditional mean path. mu[t] is defined for t >= m (0-based) and
/// NaN before; resid[t] = y[t] - mu[t] with the presample entries fixed at 0.
struct MeanPath {
  std::vector<double> mu;
  std::vector<double> resid;
  bool clamped = false;  // some mu_t saturated at the open-interval clamp
};

/// Sentinel returned by cond_loglik when the mean path degenerated to the
/// clamp boundary; large but finite so optimizers can still compare points.
inline constexpr double kLoglikFloor = -1e12;

MeanPath mean_recursion(const ModelOrder& order, const ParamVector& params,
                        LinkKind link, const BoundedSeries& y);

/// Conditional log-likelihood given the first m observations. Returns
/// kLoglikFloor when the recursion clamped. precision <= 0 raises.
double cond_loglik(const ModelOrder& order, const ParamVector& params,
                   LinkKind link, const BoundedSeries& y);

/// Analytic gradient of cond_loglik in ParamVector layout (length k).
std::vector<double> cond_loglik_grad(const ModelOrder& order, const ParamVector& params,
                                     LinkKind link, const BoundedSeries& y);

/// Value and gradient in one pass (shared recursion); used by the optimizer.
struct LoglikEval {
  double value = 0.0;
  std::vector<double> grad;
  bool clamped = false;
};

LoglikEval cond_loglik_with_grad(const ModelOrder& order, const ParamVector& params,
                                 LinkKind link, const BoundedSeries& y);

/// Default burn-in for simulation: 100 + m.
int default_burn_in(const ModelOrder& order);

/// Simulate a length-n series: run the recursion forward for burn_in + n
/// steps drawing y_t from the conditional beta at each step, discard the
/// first burn_in draws.
BoundedSeries simulate(const ModelOrder& order, const ParamVector& params,
                       LinkKind link, int n, int burn_in, RngStream& rng);

}  // namespace barma
