#pragma once

#include <utility>

#include "betarma/rng.hpp"

namespace barma {

/// Beta distribution indexed by mean and precision: the underlying shapes are
/// a = mu*phi and b = (1-mu)*phi, the mean is mu and the variance is
/// mu(1-mu)/(1+phi).
struct BetaMP {
  double mu;
  double phi;

  BetaMP(double mu_, double phi_);
};

/// Log density at y in (0,1); y outside the open interval raises a domain
/// error.
double log_pdf(const BetaMP& d, double y);

/// (mean, variance).
std::pair<double, double> mean_var(const BetaMP& d);

/// Draw Y = G1/(G1+G2) with G1 ~ Gamma(mu*phi), G2 ~ Gamma((1-mu)*phi).
/// Underflow to an endpoint is clamped back into the open interval.
double sample(const BetaMP& d, RngStream& rng);

}  // namespace barma
