#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "betarma/rng.hpp"
#include "betarma/special_math.hpp"

using namespace barma;

TEST_SUITE("special_math") {

TEST_CASE("log_gamma at known points") {
  CHECK(std::fabs(log_gamma(1.0)) < 1e-13);
  CHECK(std::fabs(log_gamma(0.5) - 0.5 * std::log(M_PI)) < 1e-12);
  CHECK(std::fabs(log_gamma(6.0) - std::log(120.0)) < 1e-12);
  CHECK(std::fabs(log_gamma(2.0)) < 1e-14);
}

TEST_CASE("log_gamma domain errors") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-3.2), std::domain_error);
}

TEST_CASE("log_gamma recurrence over random arguments") {
  RngStream rng(7001);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = 0.01 + rng.uniform() * 99.99;
    const double lhs = log_gamma(x + 1.0);
    const double rhs = log_gamma(x) + std::log(x);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("digamma at known constants") {
  const double euler = 0.57721566490153286061;
  CHECK(std::fabs(digamma(1.0) + euler) < 1e-12);
  CHECK(std::fabs(digamma(2.0) - (1.0 - euler)) < 1e-12);
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-1.0), std::domain_error);
}

TEST_CASE("digamma recurrence over random arguments") {
  RngStream rng(7002);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = 0.01 + rng.uniform() * 99.99;
    worst = std::max(worst, std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("digamma matches the finite difference of log_gamma") {
  const double h = 1e-5;
  auto fd = [h](double x) { return (log_gamma(x + h) - log_gamma(x - h)) / (2.0 * h); };
  CHECK(std::fabs(digamma(10.5) - fd(10.5)) < 1e-6);
  for (double x = 0.1; x < 100.0; x *= 1.37) {
    CAPTURE(x);
    CHECK(std::fabs(digamma(x) - fd(x)) < 1e-6);
  }
}

TEST_CASE("normal quantile and CDF") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(std::fabs(normal_quantile(0.975) - 1.959964) < 1e-6);
  CHECK(std::fabs(normal_quantile(0.995) - 2.5758293) < 1e-6);
  for (double p : {0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999}) {
    CAPTURE(p);
    CHECK(std::fabs(normal_cdf(normal_quantile(p)) - p) < 1e-12);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

namespace {

// Independent t CDF: composite Simpson quadrature of the density, using the
// standard library lgamma rather than the module under test.
double t_cdf_quad(double t, double nu) {
  const double c = std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
                   std::sqrt(nu * M_PI);
  auto pdf = [&](double u) { return c * std::pow(1.0 + u * u / nu, -0.5 * (nu + 1.0)); };
  const double lo = 0.0, hi = std::fabs(t);
  const int steps = 20000;  // even
  const double h = (hi - lo) / steps;
  double acc = pdf(lo) + pdf(hi);
  for (int i = 1; i < steps; ++i) acc += pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  const double half = acc * h / 3.0;
  return t >= 0.0 ? 0.5 + half : 0.5 - half;
}

double t_quantile_oracle(double p, double nu) {
  double lo = -200.0, hi = 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (t_cdf_quad(mid, nu) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("student t quantile against the quadrature oracle") {
  const double q10 = student_t_quantile(0.975, 10.0);
  CHECK(std::fabs(q10 - 2.228139) < 1e-5);
  CHECK(std::fabs(q10 - t_quantile_oracle(0.975, 10.0)) < 1e-7);
  CHECK(std::fabs(student_t_quantile(0.9, 3.0) - t_quantile_oracle(0.9, 3.0)) < 1e-7);
  CHECK(std::fabs(student_t_quantile(0.6, 25.0) - t_quantile_oracle(0.6, 25.0)) < 1e-7);
  // symmetric tail
  CHECK(std::fabs(student_t_quantile(0.025, 10.0) + q10) < 1e-9);
  // df -> infinity approaches the normal quantile
  CHECK(std::fabs(student_t_quantile(0.975, 1e7) - normal_quantile(0.975)) < 1e-4);
  CHECK_THROWS_AS(student_t_quantile(0.975, 0.0), std::domain_error);
}

TEST_CASE("RngStream reproducibility and substreams") {
  RngStream a(12345), b(12345);
  for (int i = 0; i < 10000; ++i) {
    REQUIRE(a.next_u64() == b.next_u64());
  }

  RngStream base(9);
  RngStream s1 = base.substream(1);
  RngStream s2 = base.substream(2);
  RngStream s1_again = base.substream(1);
  bool all_equal = true;
  for (int i = 0; i < 64; ++i) {
    const auto x1 = s1.next_u64();
    if (x1 != s1_again.next_u64()) FAIL("substream not reproducible");
    if (x1 != s2.next_u64()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("uniform stays inside the open interval") {
  RngStream rng(321);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("gamma sampling: shape 1 is inversion of the same uniform stream") {
  RngStream draws(55), uniforms(55);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample_gamma(1.0, draws) == -std::log(uniforms.uniform()));
  }
}

TEST_CASE("gamma sampling moment checks") {
  RngStream rng(56);
  const int n = 100000;
  for (double shape : {5.0, 0.5}) {
    CAPTURE(shape);
    RngStream sub = rng.substream(static_cast<std::uint64_t>(shape * 2));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += sample_gamma(shape, sub);
    const double mean = acc / n;
    const double se = std::sqrt(shape / n);  // var of Gamma(shape,1) is shape
    CHECK(std::fabs(mean - shape) < 3.0 * se);
  }
  CHECK_THROWS_AS(sample_gamma(0.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_gamma(-1.0, rng), std::domain_error);
}

}  // TEST_SUITE
