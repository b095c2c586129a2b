#include "betarma/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "betarma/beta_mp.hpp"
#include "betarma/special_math.hpp"

namespace barma {

void ModelOrder::validate() const {
  if (p < 0 || q < 0 || p + q < 1)
    throw std::invalid_argument("ModelOrder: need p,q >= 0 and p+q >= 1");
}

std::vector<double> ParamVector::flat() const {
  std::vector<double> v;
  v.reserve(size());
  v.push_back(alpha);
  v.insert(v.end(), ar.begin(), ar.end());
  v.insert(v.end(), ma.begin(), ma.end());
  v.push_back(precision);
  return v;
}

ParamVector ParamVector::from_flat(const std::vector<double>& v, const ModelOrder& order) {
  if (static_cast<int>(v.size()) != order.k())
    throw std::invalid_argument("ParamVector::from_flat: length mismatch");
  ParamVector out;
  out.alpha = v[0];
  out.ar.assign(v.begin() + 1, v.begin() + 1 + order.p);
  out.ma.assign(v.begin() + 1 + order.p, v.begin() + 1 + order.p + order.q);
  out.precision = v.back();
  return out;
}

std::string coord_name(const ModelOrder& order, int r) {
  if (r == 0) return "alpha";
  if (r <= order.p) return "ar" + std::to_string(r);
  if (r <= order.p + order.q) return "ma" + std::to_string(r - order.p);
  if (r == order.k() - 1) return "precision";
  throw std::out_of_range("coord_name: index out of range");
}

BoundedSeries BoundedSeries::from_values(std::vector<double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0 && v[i] < 1.0))
      throw std::invalid_argument("BoundedSeries: value at index " + std::to_string(i) +
                                  " is outside (0,1)");
  }
  return BoundedSeries{std::move(v)};
}

namespace {

void check_inputs(const ModelOrder& order, const ParamVector& params,
                  const BoundedSeries& y) {
  order.validate();
  if (static_cast<int>(params.ar.size()) != order.p ||
      static_cast<int>(params.ma.size()) != order.q)
    throw std::invalid_argument("parameter vector does not match the model order");
  if (y.n() <= order.m())
    throw std::invalid_argument("series shorter than the presample window");
}

bool at_clamp(double mu) { return mu <= kUnitEps || mu >= 1.0 - kUnitEps; }

}  // namespace

MeanPath mean_recursion(const ModelOrder& order, const ParamVector& params,
                        LinkKind link_kind, const BoundedSeries& y) {
  check_inputs(order, params, y);
  const int n = y.n();
  const int m = order.m();

  MeanPath path;
  path.mu.assign(n, std::numeric_limits<double>::quiet_NaN());
  path.resid.assign(n, 0.0);

  std::vector<double> gy(n);
  for (int t = 0; t < n; ++t) gy[t] = link(link_kind, y.values[t]);

  for (int t = m; t < n; ++t) {
    double eta = params.alpha;
    for (int i = 1; i <= order.p; ++i) eta += params.ar[i - 1] * gy[t - i];
    for (int j = 1; j <= order.q; ++j) eta += params.ma[j - 1] * path.resid[t - j];
    const double mu = link_inv(link_kind, eta);
    path.mu[t] = mu;
    path.resid[t] = y.values[t] - mu;
    if (at_clamp(mu)) path.clamped = true;
  }
  return path;
}

double cond_loglik(const ModelOrder& order, const ParamVector& params,
                   LinkKind link_kind, const BoundedSeries& y) {
  if (!(params.precision > 0.0))
    throw std::domain_error("cond_loglik: precision must be positive");
  const MeanPath path = mean_recursion(order, params, link_kind, y);
  if (path.clamped) return kLoglikFloor;

  const int n = y.n();
  const int m = order.m();
  const double phi = params.precision;
  const double lg_phi = log_gamma(phi);

  double ll = 0.0;
  for (int t = m; t < n; ++t) {
    const double mu = path.mu[t];
    const double a = mu * phi;
    const double b = (1.0 - mu) * phi;
    ll += lg_phi - log_gamma(a) - log_gamma(b) +
          (a - 1.0) * std::log(y.values[t]) + (b - 1.0) * std::log1p(-y.values[t]);
  }
  if (!std::isfinite(ll)) return kLoglikFloor;
  return ll;
}

LoglikEval cond_loglik_with_grad(const ModelOrder& order, const ParamVector& params,
                                 LinkKind link_kind, const BoundedSeries& y) {
  if (!(params.precision > 0.0))
    throw std::domain_error("cond_loglik_with_grad: precision must be positive");
  check_inputs(order, params, y);

  const int n = y.n();
  const int m = order.m();
  const int p = order.p;
  const int q = order.q;
  const int k = order.k();
  const int nm = k - 1;  // mean-structure coordinates (alpha, ar, ma)
  const double phi = params.precision;

  LoglikEval out;
  out.grad.assign(k, 0.0);

  std::vector<double> gy(n), logy(n), log1my(n);
  for (int t = 0; t < n; ++t) {
    gy[t] = link(link_kind, y.values[t]);
    logy[t] = std::log(y.values[t]);
    log1my[t] = std::log1p(-y.values[t]);
  }

  const double lg_phi = log_gamma(phi);
  const double psi_phi = digamma(phi);

  // dmu[t % (q+1)] holds d mu_t / d(mean params); presample derivative is 0.
  const int hist = q + 1;
  std::vector<double> dmu_hist(static_cast<std::size_t>(hist) * nm, 0.0);
  std::vector<double> resid(n, 0.0);
  std::vector<double> deta(nm);

  double ll = 0.0;
  for (int t = m; t < n; ++t) {
    double eta = params.alpha;
    for (int i = 1; i <= p; ++i) eta += params.ar[i - 1] * gy[t - i];
    for (int j = 1; j <= q; ++j) eta += params.ma[j - 1] * resid[t - j];
    const double mu = link_inv(link_kind, eta);
    resid[t] = y.values[t] - mu;
    if (at_clamp(mu)) out.clamped = true;

    // d eta_t: direct terms, then the recursive MA dependence
    // d eta_t/d gamma = direct - sum_j theta_j * d mu_{t-j}/d gamma.
    deta[0] = 1.0;
    for (int i = 1; i <= p; ++i) deta[i] = gy[t - i];
    for (int j = 1; j <= q; ++j) deta[p + j] = resid[t - j];
    for (int j = 1; j <= q; ++j) {
      if (t - j < m) continue;  // presample mu has no parameter dependence
      const double theta = params.ma[j - 1];
      if (theta == 0.0) continue;
      const double* dprev = &dmu_hist[static_cast<std::size_t>((t - j) % hist) * nm];
      for (int r = 0; r < nm; ++r) deta[r] -= theta * dprev[r];
    }

    const double gp = link_deriv(link_kind, mu);
    double* dcur = &dmu_hist[static_cast<std::size_t>(t % hist) * nm];
    for (int r = 0; r < nm; ++r) dcur[r] = deta[r] / gp;

    const double a = mu * phi;
    const double b = (1.0 - mu) * phi;
    const double psi_a = digamma(a);
    const double psi_b = digamma(b);

    ll += lg_phi - log_gamma(a) - log_gamma(b) + (a - 1.0) * logy[t] + (b - 1.0) * log1my[t];

    // dl_t/dmu = phi * (log(y/(1-y)) - psi(mu phi) + psi((1-mu) phi))
    const double dl_dmu = phi * (logy[t] - log1my[t] - psi_a + psi_b);
    for (int r = 0; r < nm; ++r) out.grad[r] += dl_dmu * dcur[r];

    // dl_t/dphi = psi(phi) - mu psi(mu phi) - (1-mu) psi((1-mu) phi)
    //             + mu log y + (1-mu) log(1-y)
    out.grad[k - 1] += psi_phi - mu * psi_a - (1.0 - mu) * psi_b +
                       mu * logy[t] + (1.0 - mu) * log1my[t];
  }

  out.value = (out.clamped || !std::isfinite(ll)) ? kLoglikFloor : ll;
  return out;
}

std::vector<double> cond_loglik_grad(const ModelOrder& order, const ParamVector& params,
                                     LinkKind link_kind, const BoundedSeries& y) {
  return cond_loglik_with_grad(order, params, link_kind, y).grad;
}

int default_burn_in(const ModelOrder& order) { return 100 + order.m(); }

BoundedSeries simulate(const ModelOrder& order, const ParamVector& params,
                       LinkKind link_kind, int n, int burn_in, RngStream& rng) {
  order.validate();
  if (static_cast<int>(params.ar.size()) != order.p ||
      static_cast<int>(params.ma.size()) != order.q)
    throw std::invalid_argument("simulate: parameter vector does not match the order");
  if (!(params.precision > 0.0))
    throw std::domain_error("simulate: precision must be positive");
  if (n < order.m() + 2)
    throw std::invalid_argument("simulate: n must be at least m+2");
  if (burn_in < 0) throw std::invalid_argument("simulate: burn_in must be >= 0");

  const int m = order.m();
  const int total = burn_in + n;

  // Presample: lagged g(y) pinned at the linear fixed point when the AR sum
  // permits one, residuals at zero; burn-in washes the choice out.
  double ar_sum = 0.0;
  for (double c : params.ar) ar_sum += c;
  const double g_init = std::fabs(ar_sum) < 1.0 ? params.alpha / (1.0 - ar_sum)
                                                : params.alpha;

  std::vector<double> gy(m + total, g_init);
  std::vector<double> resid(m + total, 0.0);
  std::vector<double> draws(total);

  for (int t = 0; t < total; ++t) {
    const int idx = m + t;
    double eta = params.alpha;
    for (int i = 1; i <= order.p; ++i) eta += params.ar[i - 1] * gy[idx - i];
    for (int j = 1; j <= order.q; ++j) eta += params.ma[j - 1] * resid[idx - j];
    const double mu = link_inv(link_kind, eta);
    const double yt = sample(BetaMP(mu, params.precision), rng);
    gy[idx] = link(link_kind, yt);
    resid[idx] = yt - mu;
    draws[t] = yt;
  }

  return BoundedSeries{std::vector<double>(draws.begin() + burn_in, draws.end())};
}

}  // namespace barma
