#include "betarma/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "betarma/special_math.hpp"
#include "linalg.hpp"

namespace barma {

namespace {

double sup_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

// Objective in optimizer coordinates: x = (alpha, ar, ma, log precision),
// f(x) = -cond_loglik. Gradient chain: d f/d s = -phi * d l/d phi.
class NegLoglik {
 public:
  NegLoglik(const ModelOrder& order, LinkKind link, const BoundedSeries& y)
      : order_(order), link_(link), y_(y) {}

  int dim() const { return order_.k(); }

  ParamVector to_params(const std::vector<double>& x) const {
    ParamVector p = ParamVector::from_flat(x, order_);
    p.precision = std::exp(x.back());
    return p;
  }

  static std::vector<double> to_coords(const ParamVector& p) {
    std::vector<double> x = p.flat();
    x.back() = std::log(p.precision);
    return x;
  }

  struct Eval {
    double f = 0.0;
    std::vector<double> grad;
    bool degenerate = false;
  };

  Eval operator()(const std::vector<double>& x) const {
    const ParamVector p = to_params(x);
    LoglikEval e = cond_loglik_with_grad(order_, p, link_, y_);
    Eval out;
    out.degenerate = e.clamped || !std::isfinite(e.value);
    out.f = -e.value;
    out.grad.resize(e.grad.size());
    for (std::size_t r = 0; r < e.grad.size(); ++r) out.grad[r] = -e.grad[r];
    out.grad.back() *= p.precision;  // log-scale chain rule
    if (out.degenerate) {
      // gradient is unusable on the clamp plateau
      std::fill(out.grad.begin(), out.grad.end(), 0.0);
    }
    return out;
  }

 private:
  const ModelOrder& order_;
  LinkKind link_;
  const BoundedSeries& y_;
};

struct LineSearchResult {
  double alpha = 0.0;
  NegLoglik::Eval eval;
  bool ok = false;
};

// Strong Wolfe line search (bracket + zoom), c1 = 1e-4, c2 = 0.9.
LineSearchResult wolfe_search(const NegLoglik& obj, const std::vector<double>& x,
                              const std::vector<double>& dir, const NegLoglik::Eval& at_x) {
  constexpr double c1 = 1e-4;
  constexpr double c2 = 0.9;
  constexpr int kMaxBracket = 20;
  constexpr int kMaxZoom = 30;

  const int n = static_cast<int>(x.size());
  double dphi0 = 0.0;
  for (int i = 0; i < n; ++i) dphi0 += at_x.grad[i] * dir[i];
  if (dphi0 >= 0.0) return {};  // not a descent direction

  std::vector<double> trial(n);
  auto eval_at = [&](double a) {
    for (int i = 0; i < n; ++i) trial[i] = x[i] + a * dir[i];
    return obj(trial);
  };
  auto slope = [&](const NegLoglik::Eval& e) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += e.grad[i] * dir[i];
    return s;
  };

  LineSearchResult best;  // best sufficient-decrease point seen

  auto zoom = [&](double lo, NegLoglik::Eval elo, double hi) -> LineSearchResult {
    for (int it = 0; it < kMaxZoom; ++it) {
      const double a = 0.5 * (lo + hi);
      NegLoglik::Eval e = eval_at(a);
      if (e.f > at_x.f + c1 * a * dphi0 || e.f >= elo.f) {
        hi = a;
      } else {
        const double d = slope(e);
        if (std::fabs(d) <= -c2 * dphi0) return {a, std::move(e), true};
        if (d * (hi - lo) >= 0.0) hi = lo;
        lo = a;
        elo = std::move(e);
      }
      if (std::fabs(hi - lo) < 1e-16 * (1.0 + std::fabs(lo))) break;
    }
    if (elo.f < at_x.f) return {lo, std::move(elo), true};
    return {};
  };

  double a_prev = 0.0;
  NegLoglik::Eval e_prev = at_x;
  double a = 1.0;
  for (int it = 0; it < kMaxBracket; ++it) {
    NegLoglik::Eval e = eval_at(a);
    if (e.f > at_x.f + c1 * a * dphi0 || (it > 0 && e.f >= e_prev.f)) {
      return zoom(a_prev, std::move(e_prev), a);
    }
    const double d = slope(e);
    if (std::fabs(d) <= -c2 * dphi0) return {a, std::move(e), true};
    if (d >= 0.0) return zoom(a, std::move(e), a_prev);
    a_prev = a;
    e_prev = std::move(e);
    a = std::min(2.0 * a, 1e3);
    if (a_prev >= 1e3) break;
  }
  if (e_prev.f < at_x.f) return {a_prev, std::move(e_prev), true};
  return best;
}

// Numeric Hessian of cond_loglik on the natural scale, central differences,
// negated and symmetrized.
std::vector<double> neg_numeric_hessian(const ModelOrder& order, LinkKind link,
                                        const BoundedSeries& y, const ParamVector& at,
                                        double rel_step) {
  const int k = order.k();
  const std::vector<double> base = at.flat();

  std::vector<double> h(k);
  for (int r = 0; r < k; ++r) h[r] = rel_step * (1.0 + std::fabs(base[r]));
  // keep the precision coordinate positive under the +/- probes
  h[k - 1] = std::min(h[k - 1], 0.45 * base[k - 1]);

  auto ll = [&](std::vector<double> v) {
    return cond_loglik(order, ParamVector::from_flat(v, order), link, y);
  };

  const double f0 = ll(base);
  std::vector<double> hess(static_cast<std::size_t>(k) * k, 0.0);

  for (int i = 0; i < k; ++i) {
    std::vector<double> v = base;
    v[i] = base[i] + h[i];
    const double fp = ll(v);
    v[i] = base[i] - h[i];
    const double fm = ll(v);
    hess[i * k + i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      std::vector<double> v = base;
      v[i] = base[i] + h[i];
      v[j] = base[j] + h[j];
      const double fpp = ll(v);
      v[j] = base[j] - h[j];
      const double fpm = ll(v);
      v[i] = base[i] - h[i];
      const double fmm = ll(v);
      v[j] = base[j] + h[j];
      const double fmp = ll(v);
      const double hij = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      hess[i * k + j] = hij;
      hess[j * k + i] = hij;
    }
  }
  for (double& v : hess) v = -v;
  return hess;
}

}  // namespace

ParamVector starting_values(const ModelOrder& order, LinkKind link_kind,
                            const BoundedSeries& y, bool* ols_singular) {
  order.validate();
  const int n = y.n();
  const int m = order.m();
  const int p = order.p;
  if (n <= m + p + 1)
    throw std::invalid_argument("starting_values: series too short for the OLS start");
  if (ols_singular) *ols_singular = false;

  std::vector<double> gy(n);
  for (int t = 0; t < n; ++t) gy[t] = link(link_kind, y.values[t]);

  const int rows = n - m;
  const int cols = p + 1;

  // Normal equations for the regression of g(y_t) on [1, g(y_{t-1})..g(y_{t-p})].
  std::vector<double> xtx(static_cast<std::size_t>(cols) * cols, 0.0);
  std::vector<double> xty(cols, 0.0);
  std::vector<double> xrow(cols);
  for (int t = m; t < n; ++t) {
    xrow[0] = 1.0;
    for (int i = 1; i <= p; ++i) xrow[i] = gy[t - i];
    for (int a = 0; a < cols; ++a) {
      xty[a] += xrow[a] * gy[t];
      for (int b = 0; b < cols; ++b) xtx[a * cols + b] += xrow[a] * xrow[b];
    }
  }

  std::vector<double> beta;
  bool ok = detail::solve_inplace(xtx, xty, beta, cols, 1e-10);

  ParamVector start;
  start.ar.assign(order.p, 0.0);
  start.ma.assign(order.q, 0.0);

  double evar = 0.0;
  std::vector<double> fitted_eta(rows);
  if (ok) {
    start.alpha = beta[0];
    for (int i = 0; i < p; ++i) start.ar[i] = beta[i + 1];
    double sse = 0.0;
    for (int t = m; t < n; ++t) {
      double eta = beta[0];
      for (int i = 1; i <= p; ++i) eta += beta[i] * gy[t - i];
      fitted_eta[t - m] = eta;
      const double e = gy[t] - eta;
      sse += e * e;
    }
    evar = rows > cols ? sse / (rows - cols) : 0.0;
  } else {
    if (ols_singular) *ols_singular = true;
    double ybar = 0.0;
    for (double v : y.values) ybar += v;
    ybar /= n;
    start.alpha = link(link_kind, ybar);
    double sse = 0.0;
    for (int t = m; t < n; ++t) {
      const double e = gy[t] - start.alpha;
      sse += e * e;
    }
    evar = rows > 1 ? sse / (rows - 1) : 0.0;
    std::fill(fitted_eta.begin(), fitted_eta.end(), start.alpha);
  }

  // Beta-regression precision recipe: phi0 = mean[ mu(1-mu)/sigma^2 - 1 ]
  // with sigma_t^2 = evar / g'(mu_t)^2.
  double phi0 = 1e6;
  if (evar > 1e-12) {
    double acc = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double mu = link_inv(link_kind, fitted_eta[i]);
      const double gp = link_deriv(link_kind, mu);
      const double sigma2 = evar / (gp * gp);
      acc += mu * (1.0 - mu) / sigma2 - 1.0;
    }
    phi0 = acc / rows;
  }
  start.precision = std::clamp(phi0, 0.1, 1e6);
  return start;
}

FitReport fit(const ModelOrder& order, LinkKind link_kind, const BoundedSeries& y,
              const FitOptions& options) {
  order.validate();
  if (y.n() < order.m() + 2)
    throw std::invalid_argument("fit: series must have at least m+2 observations");
  bool fallback = false;
  const ParamVector start = starting_values(order, link_kind, y, &fallback);
  FitReport report = fit_from(order, link_kind, y, start, options);
  report.start_fallback = fallback;
  return report;
}

FitReport fit_from(const ModelOrder& order, LinkKind link_kind, const BoundedSeries& y,
                   const ParamVector& start, const FitOptions& options) {
  order.validate();
  if (y.n() < order.m() + 2)
    throw std::invalid_argument("fit: series must have at least m+2 observations");

  FitReport report;
  report.order = order;
  report.link = link_kind;

  NegLoglik obj(order, link_kind, y);
  const int k = obj.dim();

  std::vector<double> x = NegLoglik::to_coords(start);
  NegLoglik::Eval cur = obj(x);
  if (cur.degenerate)
    throw std::runtime_error("fit: likelihood is not finite at the starting values");

  auto grad_converged = [&](const NegLoglik::Eval& e) {
    return sup_norm(e.grad) < options.grad_tol * (1.0 + std::fabs(e.f));
  };

  // Dense inverse-Hessian BFGS.
  std::vector<double> H(static_cast<std::size_t>(k) * k, 0.0);
  auto reset_h = [&](double scale) {
    std::fill(H.begin(), H.end(), 0.0);
    for (int i = 0; i < k; ++i) H[i * k + i] = scale;
  };
  reset_h(1.0);

  std::vector<double> dir(k), s(k), yv(k), hy(k);
  bool converged = grad_converged(cur);
  int iter = 0;
  bool first_step = true;

  while (!converged && iter < options.max_iterations) {
    ++iter;

    double descent = 0.0;
    for (int i = 0; i < k; ++i) {
      double d = 0.0;
      for (int j = 0; j < k; ++j) d -= H[i * k + j] * cur.grad[j];
      dir[i] = d;
      descent += d * cur.grad[i];
    }
    if (!(descent < 0.0)) {
      reset_h(1.0);
      for (int i = 0; i < k; ++i) dir[i] = -cur.grad[i];
    }

    LineSearchResult ls = wolfe_search(obj, x, dir, cur);
    if (!ls.ok) {
      // no usable decrease along the quasi-Newton direction; retry once along
      // the raw gradient before giving up
      reset_h(1.0);
      for (int i = 0; i < k; ++i) dir[i] = -cur.grad[i];
      ls = wolfe_search(obj, x, dir, cur);
      if (!ls.ok) break;
    }

    double step_norm = 0.0;
    for (int i = 0; i < k; ++i) {
      s[i] = ls.alpha * dir[i];
      step_norm = std::max(step_norm, std::fabs(s[i]));
      yv[i] = ls.eval.grad[i] - cur.grad[i];
      x[i] += s[i];
    }
    cur = std::move(ls.eval);

    if (grad_converged(cur) || step_norm < options.step_tol) {
      converged = true;
      break;
    }

    double ys = 0.0, yy = 0.0;
    for (int i = 0; i < k; ++i) {
      ys += yv[i] * s[i];
      yy += yv[i] * yv[i];
    }
    if (ys > 1e-12 * std::sqrt(yy) * sup_norm(s)) {
      if (first_step) {
        reset_h(ys / yy);
        first_step = false;
      }
      // H <- (I - rho s y') H (I - rho y s') + rho s s'
      const double rho = 1.0 / ys;
      for (int i = 0; i < k; ++i) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) acc += H[i * k + j] * yv[j];
        hy[i] = acc;
      }
      double yhy = 0.0;
      for (int i = 0; i < k; ++i) yhy += yv[i] * hy[i];
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          H[i * k + j] += rho * rho * yhy * s[i] * s[j] + rho * s[i] * s[j] -
                          rho * (s[i] * hy[j] + hy[i] * s[j]);
        }
      }
    }
  }

  report.estimate = obj.to_params(x);
  report.loglik = -cur.f;
  report.converged = converged;
  report.iterations = iter;
  report.grad_norm = sup_norm(cur.grad);

  if (options.compute_info_matrix) {
    report.info_matrix = neg_numeric_hessian(order, link_kind, y, report.estimate,
                                             options.hessian_step);
    const auto inv = detail::invert(report.info_matrix, k);
    report.info_ok = !inv.empty();
    if (report.info_ok) {
      for (int r = 0; r < k; ++r) {
        if (!(inv[r * k + r] > 0.0)) {
          report.info_ok = false;
          break;
        }
      }
    }
  }
  return report;
}

std::vector<ConfidenceInterval> asymptotic_ci(const FitReport& report, double level) {
  if (!(level > 0.5 && level < 1.0))
    throw std::invalid_argument("asymptotic_ci: level must be in (0.5, 1)");
  const int k = report.order.k();
  if (static_cast<int>(report.info_matrix.size()) != k * k)
    throw std::invalid_argument("asymptotic_ci: fit carries no information matrix");

  const auto inv = detail::invert(report.info_matrix, k);
  if (inv.empty()) {
    std::string coords;
    for (int r = 0; r < k; ++r)
      coords += (r ? ", " : "") + coord_name(report.order, r);
    throw std::runtime_error("asymptotic_ci: information matrix is singular (" + coords + ")");
  }
  std::string bad;
  for (int r = 0; r < k; ++r) {
    if (!(inv[r * k + r] > 0.0))
      bad += (bad.empty() ? "" : ", ") + coord_name(report.order, r);
  }
  if (!bad.empty())
    throw std::runtime_error(
        "asymptotic_ci: information matrix inverse has non-positive variance for " + bad);

  const double z = link(LinkKind::probit, 0.5 + 0.5 * level);
  const std::vector<double> est = report.estimate.flat();
  std::vector<ConfidenceInterval> out(k);
  for (int r = 0; r < k; ++r) {
    const double hw = z * std::sqrt(inv[r * k + r]);
    out[r] = {est[r] - hw, est[r] + hw, level, CiKind::asymptotic};
  }
  return out;
}

}  // namespace barma
