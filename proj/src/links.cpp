#include "betarma/links.hpp"

#include <cmath>
#include <stdexcept>

#include "betarma/special_math.hpp"

namespace barma {

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;

void check_unit(double mu, const char* who) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::domain_error(std::string(who) + ": argument must be in (0,1)");
}

}  // namespace

LinkKind link_from_name(const std::string& name) {
  if (name == "logit") return LinkKind::logit;
  if (name == "probit") return LinkKind::probit;
  if (name == "cloglog") return LinkKind::cloglog;
  throw std::invalid_argument("unknown link: " + name);
}

std::string link_name(LinkKind k) {
  switch (k) {
    case LinkKind::logit: return "logit";
    case LinkKind::probit: return "probit";
    case LinkKind::cloglog: return "cloglog";
  }
  return "logit";
}

double clamp_unit(double y) {
  if (y < kUnitEps) return kUnitEps;
  if (y > 1.0 - kUnitEps) return 1.0 - kUnitEps;
  return y;
}

double link(LinkKind k, double mu) {
  check_unit(mu, "link");
  switch (k) {
    case LinkKind::logit:
      return std::log(mu / (1.0 - mu));
    case LinkKind::probit:
      return normal_quantile(mu);
    case LinkKind::cloglog:
      return std::log(-std::log1p(-mu));
  }
  return 0.0;
}

double link_inv(LinkKind k, double eta) {
  switch (k) {
    case LinkKind::logit: {
      const double mu = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                                   : std::exp(eta) / (1.0 + std::exp(eta));
      return clamp_unit(mu);
    }
    case LinkKind::probit:
      return clamp_unit(normal_cdf(eta));
    case LinkKind::cloglog:
      return clamp_unit(-std::expm1(-std::exp(eta)));
  }
  return 0.5;
}

double link_deriv(LinkKind k, double mu) {
  check_unit(mu, "link_deriv");
  switch (k) {
    case LinkKind::logit:
      return 1.0 / (mu * (1.0 - mu));
    case LinkKind::probit: {
      const double z = normal_quantile(mu);
      return kSqrt2Pi * std::exp(0.5 * z * z);
    }
    case LinkKind::cloglog:
      return -1.0 / ((1.0 - mu) * std::log1p(-mu));
  }
  return 0.0;
}

}  // namespace barma
