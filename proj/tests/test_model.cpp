#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "betarma/beta_mp.hpp"
#include "betarma/model.hpp"
#include "betarma/special_math.hpp"

using namespace barma;

namespace {

BoundedSeries fixed_series10() {
  return BoundedSeries::from_values(
      {0.31, 0.52, 0.44, 0.61, 0.29, 0.55, 0.48, 0.66, 0.37, 0.59});
}

ParamVector make_params(const ModelOrder& order, double alpha,
                        std::vector<double> ar, std::vector<double> ma, double phi) {
  ParamVector p;
  p.alpha = alpha;
  p.ar = std::move(ar);
  p.ma = std::move(ma);
  p.precision = phi;
  REQUIRE(static_cast<int>(p.ar.size()) == order.p);
  REQUIRE(static_cast<int>(p.ma.size()) == order.q);
  return p;
}

// Random stable-ish parameter point plus a series simulated from it.
struct Instance {
  ParamVector params;
  BoundedSeries y;
};

Instance random_instance(const ModelOrder& order, RngStream& rng, int n = 60) {
  ParamVector p;
  p.alpha = -0.8 + 1.6 * rng.uniform();
  double budget = 0.85;
  for (int i = 0; i < order.p; ++i) {
    const double c = (rng.uniform() - 0.5) * budget;
    p.ar.push_back(c);
    budget -= std::fabs(c);
  }
  for (int j = 0; j < order.q; ++j) p.ma.push_back((rng.uniform() - 0.5) * 1.6);
  p.precision = std::exp(std::log(5.0) + rng.uniform() * std::log(150.0 / 5.0));
  RngStream sim = rng.substream(17);
  BoundedSeries y = simulate(order, p, LinkKind::logit, n, default_burn_in(order), sim);
  return {std::move(p), std::move(y)};
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("order and parameter layout") {
  CHECK_THROWS_AS((ModelOrder{0, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ModelOrder{-1, 2}).validate(), std::invalid_argument);
  const ModelOrder order{2, 1};
  CHECK(order.m() == 2);
  CHECK(order.k() == 5);

  ParamVector p = make_params(order, 0.3, {0.1, -0.2}, {0.5}, 9.0);
  const auto flat = p.flat();
  CHECK(flat == std::vector<double>{0.3, 0.1, -0.2, 0.5, 9.0});
  const ParamVector back = ParamVector::from_flat(flat, order);
  CHECK(back.alpha == 0.3);
  CHECK(back.ar == p.ar);
  CHECK(back.ma == p.ma);
  CHECK(back.precision == 9.0);

  CHECK(coord_name(order, 0) == "alpha");
  CHECK(coord_name(order, 1) == "ar1");
  CHECK(coord_name(order, 2) == "ar2");
  CHECK(coord_name(order, 3) == "ma1");
  CHECK(coord_name(order, 4) == "precision");

  CHECK_THROWS_AS(BoundedSeries::from_values({0.5, 1.5}), std::invalid_argument);
}

TEST_CASE("identity recursion: AR(1) with unit coefficient reproduces the lag") {
  const ModelOrder order{1, 0};
  const ParamVector p = make_params(order, 0.0, {1.0}, {}, 30.0);
  const BoundedSeries y = fixed_series10();
  const MeanPath path = mean_recursion(order, p, LinkKind::logit, y);
  for (int t = 1; t < y.n(); ++t) {
    CHECK(std::fabs(path.mu[t] - y.values[t - 1]) < 1e-12);
    CHECK(std::fabs(path.resid[t] - (y.values[t] - y.values[t - 1])) < 1e-12);
  }
  CHECK(std::isnan(path.mu[0]));
  CHECK(path.resid[0] == 0.0);
}

TEST_CASE("MA(1) with zero coefficient gives a constant mean") {
  const ModelOrder order{0, 1};
  const ParamVector p = make_params(order, -0.4, {}, {0.0}, 10.0);
  const BoundedSeries y = fixed_series10();
  const MeanPath path = mean_recursion(order, p, LinkKind::logit, y);
  const double expect = link_inv(LinkKind::logit, -0.4);
  for (int t = 1; t < y.n(); ++t) CHECK(path.mu[t] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("ARMA(1,1) path equals a straight-line reimplementation") {
  const ModelOrder order{1, 1};
  const ParamVector p = make_params(order, -0.5, {0.5}, {1.0}, 20.0);
  const BoundedSeries y = fixed_series10();
  const MeanPath path = mean_recursion(order, p, LinkKind::logit, y);

  // independent loop, written directly from the recursion definition
  const int n = y.n();
  std::vector<double> mu(n, 0.0), r(n, 0.0);
  for (int t = 1; t < n; ++t) {
    const double gy = std::log(y.values[t - 1] / (1.0 - y.values[t - 1]));
    const double eta = -0.5 + 0.5 * gy + 1.0 * r[t - 1];
    mu[t] = 1.0 / (1.0 + std::exp(-eta));
    r[t] = y.values[t] - mu[t];
  }
  for (int t = 1; t < n; ++t) {
    CHECK(std::fabs(path.mu[t] - mu[t]) < 1e-14);
    CHECK(std::fabs(path.resid[t] - r[t]) < 1e-14);
  }
}

TEST_CASE("conditional log-likelihood is the sum of conditional log densities") {
  const ModelOrder order{1, 1};
  const ParamVector p = make_params(order, 0.2, {-0.3}, {0.4}, 15.0);
  const BoundedSeries y = fixed_series10();
  const MeanPath path = mean_recursion(order, p, LinkKind::logit, y);

  double expect = 0.0;
  for (int t = order.m(); t < y.n(); ++t)
    expect += log_pdf(BetaMP(path.mu[t], p.precision), y.values[t]);
  CHECK(cond_loglik(order, p, LinkKind::logit, y) == doctest::Approx(expect).epsilon(1e-14));

  SUBCASE("single usable term for n = 2") {
    const ModelOrder o1{1, 0};
    const ParamVector p1 = make_params(o1, 0.1, {0.2}, {}, 8.0);
    const BoundedSeries y2 = BoundedSeries::from_values({0.4, 0.6});
    const MeanPath path1 = mean_recursion(o1, p1, LinkKind::logit, y2);
    const double one = log_pdf(BetaMP(path1.mu[1], 8.0), 0.6);
    CHECK(cond_loglik(o1, p1, LinkKind::logit, y2) == doctest::Approx(one).epsilon(1e-14));
  }

  SUBCASE("precision domain error") {
    ParamVector bad = p;
    bad.precision = 0.0;
    CHECK_THROWS_AS(cond_loglik(order, bad, LinkKind::logit, y), std::domain_error);
  }
}

TEST_CASE("appending an observation preserves the earlier mean path") {
  const ModelOrder order{1, 1};
  const ParamVector p = make_params(order, -0.2, {0.4}, {-0.3}, 25.0);
  BoundedSeries y = fixed_series10();
  const MeanPath before = mean_recursion(order, p, LinkKind::logit, y);
  y.values.push_back(0.45);
  const MeanPath after = mean_recursion(order, p, LinkKind::logit, y);
  for (int t = order.m(); t < static_cast<int>(before.mu.size()); ++t) {
    CHECK(after.mu[t] == before.mu[t]);
    CHECK(after.resid[t] == before.resid[t]);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  RngStream rng(2024);
  for (const ModelOrder order : {ModelOrder{1, 0}, ModelOrder{0, 1},
                                 ModelOrder{1, 1}, ModelOrder{2, 2}}) {
    RngStream sub = rng.substream(order.p * 8 + order.q);
    for (int rep = 0; rep < 6; ++rep) {
      RngStream inst_rng = sub.substream(rep);
      const Instance inst = random_instance(order, inst_rng);
      const std::vector<double> grad =
          cond_loglik_grad(order, inst.params, LinkKind::logit, inst.y);

      const std::vector<double> base = inst.params.flat();
      for (int r = 0; r < order.k(); ++r) {
        const double h = 1e-6 * (1.0 + std::fabs(base[r]));
        std::vector<double> up = base, dn = base;
        up[r] += h;
        dn[r] -= h;
        const double fd = (cond_loglik(order, ParamVector::from_flat(up, order),
                                       LinkKind::logit, inst.y) -
                           cond_loglik(order, ParamVector::from_flat(dn, order),
                                       LinkKind::logit, inst.y)) /
                          (2.0 * h);
        CAPTURE(order.p);
        CAPTURE(order.q);
        CAPTURE(r);
        CHECK(std::fabs(grad[r] - fd) <= 1e-4 * (1.0 + std::fabs(fd)));
      }
    }
  }
}

TEST_CASE("AR-only gradient of alpha has the closed non-recursive form") {
  // with q = 0 there is no recursive dependence: d mu_t/d alpha = 1/g'(mu_t)
  const ModelOrder order{1, 0};
  const ParamVector p = make_params(order, 0.3, {-0.4}, {}, 18.0);
  const BoundedSeries y = fixed_series10();
  const MeanPath path = mean_recursion(order, p, LinkKind::logit, y);

  double expect = 0.0;
  for (int t = 1; t < y.n(); ++t) {
    const double mu = path.mu[t];
    const double dl_dmu = p.precision * (std::log(y.values[t] / (1.0 - y.values[t])) -
                                         digamma(mu * p.precision) +
                                         digamma((1.0 - mu) * p.precision));
    expect += dl_dmu * (mu * (1.0 - mu));  // 1/g'(mu) for the logit link
  }
  const auto grad = cond_loglik_grad(order, p, LinkKind::logit, y);
  CHECK(grad[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("simulate: independent draws when the dynamics are switched off") {
  const ModelOrder order{1, 0};
  const ParamVector p = make_params(order, link(LinkKind::logit, 0.5), {0.0}, {}, 20.0);
  RngStream rng(31);
  const int n = 10000;
  const BoundedSeries y = simulate(order, p, LinkKind::logit, n, 100, rng);
  REQUIRE(y.n() == n);
  double acc = 0.0;
  for (double v : y.values) acc += v;
  const double mean = acc / n;
  const double se = std::sqrt(0.25 / 21.0 / n);
  CHECK(std::fabs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("simulate determinism") {
  const ModelOrder order{1, 1};
  const ParamVector p = make_params(order, -0.5, {0.5}, {1.0}, 20.0);
  RngStream a(777), b(777);
  const BoundedSeries ya = simulate(order, p, LinkKind::logit, 64, 100, a);
  const BoundedSeries yb = simulate(order, p, LinkKind::logit, 64, 100, b);
  CHECK(ya.values == yb.values);
  for (double v : ya.values) {
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("AR(1) long-run behavior agrees with an independent simulator") {
  const ModelOrder order{1, 0};
  const ParamVector p = make_params(order, 1.0, {-0.5}, {}, 20.0);
  const int n = 100000;

  RngStream rng_lib(4100);
  const BoundedSeries y = simulate(order, p, LinkKind::logit, n, 200, rng_lib);
  double mean_lib = 0.0;
  for (double v : y.values) mean_lib += std::log(v / (1.0 - v));
  mean_lib /= n;

  // straight-line independent simulator (own recursion, library gamma draws)
  RngStream rng_ind(8200);
  double g_prev = 1.0 / 1.5;  // fixed point as the start
  double mean_ind = 0.0;
  int kept = 0;
  for (int t = 0; t < n + 200; ++t) {
    const double eta = 1.0 - 0.5 * g_prev;
    const double mu = 1.0 / (1.0 + std::exp(-eta));
    const double g1 = sample_gamma(mu * 20.0, rng_ind);
    const double g2 = sample_gamma((1.0 - mu) * 20.0, rng_ind);
    const double yt = g1 / (g1 + g2);
    g_prev = std::log(yt / (1.0 - yt));
    if (t >= 200) {
      mean_ind += g_prev;
      ++kept;
    }
  }
  mean_ind /= kept;

  // sd(g(y)) is ~0.5 here and the lag-1 correlation is negative, so the
  // per-stream SE of the mean is below 0.5/sqrt(n); compare at 6 combined SE
  const double se_guess = 0.5 / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(mean_lib - mean_ind) < 6.0 * se_guess);
  // both near the linearized fixed point alpha/(1-ar1) = 2/3
  CHECK(std::fabs(mean_lib - 2.0 / 3.0) < 0.05);
}

namespace {

bool hit_clamp(const BoundedSeries& y) {
  for (double v : y.values)
    if (v <= kUnitEps || v >= 1.0 - kUnitEps) return true;
  return false;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double ks = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    ks = std::max(ks, std::fabs(static_cast<double>(i) / a.size() -
                                static_cast<double>(j) / b.size()));
  }
  return ks;
}

// Serial dependence breaks the iid KS null; keep every stride-th draw so the
// critical value applies while the marginal stays the stationary law.
std::vector<double> thin(const std::vector<double>& x, int stride) {
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); i += stride) out.push_back(x[i]);
  return out;
}

}  // namespace

TEST_CASE("burn-in invariance of the stationary distribution (KS)") {
  // The AR(1) and MA(1) processes are well behaved: burn_in 0 and 500 give
  // the same stationary draw distribution.
  struct Case {
    ModelOrder order;
    ParamVector params;
  };
  std::vector<Case> cases;
  cases.push_back({{1, 0}, make_params({1, 0}, 1.0, {-0.5}, {}, 20.0)});
  cases.push_back({{1, 0}, make_params({1, 0}, 1.0, {-0.5}, {}, 120.0)});
  cases.push_back({{0, 1}, make_params({0, 1}, -1.0, {}, {1.0}, 20.0)});
  cases.push_back({{0, 1}, make_params({0, 1}, 1.0, {}, {-0.5}, 120.0)});

  const int n = 10000;
  const int stride = 5;
  const double crit = 1.628 * std::sqrt(2.0 / (n / stride));  // ~1% level
  for (std::size_t c = 0; c < cases.size(); ++c) {
    RngStream r1(5000 + c), r2(6000 + c);
    BoundedSeries a = simulate(cases[c].order, cases[c].params, LinkKind::logit, n, 0, r1);
    BoundedSeries b = simulate(cases[c].order, cases[c].params, LinkKind::logit, n, 500, r2);
    CAPTURE(c);
    CHECK(two_sample_ks(thin(a.values, stride), thin(b.values, stride)) < crit);
  }
}

TEST_CASE("ARMA(1,1) scenarios: KS invariance unless the boundary trap fires") {
  // With a strong MA feedback the recursion can dive toward an absorbing
  // clamp state on long horizons (the transfer function is not guaranteed
  // stable). Accept either outcome per run, but verify that non-trapped
  // pairs agree in distribution and that traps are detectable via the clamp.
  struct Case {
    ModelOrder order;
    ParamVector params;
  };
  std::vector<Case> cases;
  cases.push_back({{1, 1}, make_params({1, 1}, -0.5, {0.5}, {1.0}, 20.0)});
  cases.push_back({{1, 1}, make_params({1, 1}, 1.0, {0.5}, {-1.5}, 120.0)});

  const int n = 10000;
  const int stride = 5;
  const double crit = 1.628 * std::sqrt(2.0 / (n / stride));
  int pairs_compared = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    for (int rep = 0; rep < 4; ++rep) {
      RngStream r1(7000 + 10 * c + rep), r2(8000 + 10 * c + rep);
      BoundedSeries a =
          simulate(cases[c].order, cases[c].params, LinkKind::logit, n, 0, r1);
      BoundedSeries b =
          simulate(cases[c].order, cases[c].params, LinkKind::logit, n, 500, r2);
      if (hit_clamp(a) || hit_clamp(b)) continue;  // absorbed run; n/a
      CAPTURE(c);
      CAPTURE(rep);
      CHECK(two_sample_ks(thin(a.values, stride), thin(b.values, stride)) < crit);
      ++pairs_compared;
    }
  }
  CHECK(pairs_compared > 0);
}

TEST_CASE("residuals bounded and means inside the open interval") {
  RngStream rng(61);
  const Instance inst = random_instance(ModelOrder{2, 2}, rng, 200);
  const MeanPath path = mean_recursion(ModelOrder{2, 2}, inst.params, LinkKind::logit, inst.y);
  for (int t = 2; t < inst.y.n(); ++t) {
    CHECK(path.mu[t] > 0.0);
    CHECK(path.mu[t] < 1.0);
    CHECK(path.resid[t] > -1.0);
    CHECK(path.resid[t] < 1.0);
  }
}

}  // TEST_SUITE
