#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "betarma/beta_mp.hpp"
#include "betarma/links.hpp"

using namespace barma;

TEST_SUITE("links") {

TEST_CASE("logit values") {
  CHECK(link(LinkKind::logit, 0.5) == 0.0);
  CHECK(std::fabs(link(LinkKind::logit, 0.9) - std::log(9.0)) < 1e-12);
  CHECK(link_inv(LinkKind::logit, 0.0) == 0.5);
  CHECK(std::fabs(link_inv(LinkKind::logit, std::log(9.0)) - 0.9) < 1e-12);
}

TEST_CASE("probit matches the normal quantile") {
  CHECK(std::fabs(link(LinkKind::probit, 0.975) - 1.959964) < 1e-6);
  CHECK(link(LinkKind::probit, 0.5) == 0.0);
}

TEST_CASE("cloglog at an exact point") {
  // g(1 - e^{-1}) = ln(-ln(e^{-1})) = 0
  CHECK(std::fabs(link(LinkKind::cloglog, 1.0 - std::exp(-1.0))) < 1e-12);
}

TEST_CASE("round trip link_inv(link(mu)) = mu") {
  for (LinkKind k : {LinkKind::logit, LinkKind::probit, LinkKind::cloglog}) {
    for (double mu = 0.001; mu < 0.9995; mu += 0.007) {
      CAPTURE(link_name(k));
      CAPTURE(mu);
      CHECK(std::fabs(link_inv(k, link(k, mu)) - mu) < 1e-12);
    }
  }
}

TEST_CASE("link_deriv positive and matching finite differences") {
  const double h = 1e-7;
  for (LinkKind k : {LinkKind::logit, LinkKind::probit, LinkKind::cloglog}) {
    for (double mu = 0.01; mu < 0.995; mu += 0.0132) {
      CAPTURE(link_name(k));
      CAPTURE(mu);
      const double d = link_deriv(k, mu);
      CHECK(d > 0.0);
      const double fd = (link(k, mu + h) - link(k, mu - h)) / (2.0 * h);
      CHECK(std::fabs(d - fd) < 1e-6 * std::max(1.0, std::fabs(fd)));
    }
  }
  CHECK(link_deriv(LinkKind::logit, 0.5) == 4.0);
  // cloglog derivative at mu = 1 - e^{-1} equals e
  CHECK(std::fabs(link_deriv(LinkKind::cloglog, 1.0 - std::exp(-1.0)) - std::exp(1.0)) < 1e-9);
}

TEST_CASE("saturation keeps the log density finite") {
  for (LinkKind k : {LinkKind::logit, LinkKind::probit, LinkKind::cloglog}) {
    for (double eta : {-1e4, -50.0, 50.0, 1e4}) {
      const double mu = link_inv(k, eta);
      CHECK(mu >= kUnitEps);
      CHECK(mu <= 1.0 - kUnitEps);
      CHECK(std::isfinite(log_pdf(BetaMP(mu, 20.0), 0.37)));
    }
  }
}

TEST_CASE("domain errors and name parsing") {
  CHECK_THROWS_AS(link(LinkKind::logit, 0.0), std::domain_error);
  CHECK_THROWS_AS(link(LinkKind::logit, 1.0), std::domain_error);
  CHECK_THROWS_AS(link_deriv(LinkKind::probit, -0.5), std::domain_error);
  CHECK(link_from_name("logit") == LinkKind::logit);
  CHECK(link_from_name("cloglog") == LinkKind::cloglog);
  CHECK_THROWS_AS(link_from_name("identity"), std::invalid_argument);
  CHECK(link_name(LinkKind::probit) == "probit");
}

}  // TEST_SUITE
