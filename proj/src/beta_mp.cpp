#include "betarma/beta_mp.hpp"

#include <cmath>
#include <stdexcept>

#include "betarma/links.hpp"
#include "betarma/special_math.hpp"

namespace barma {

BetaMP::BetaMP(double mu_, double phi_) : mu(mu_), phi(phi_) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::domain_error("BetaMP: mean must be in (0,1)");
  if (!(phi > 0.0))
    throw std::domain_error("BetaMP: precision must be positive");
}

double log_pdf(const BetaMP& d, double y) {
  if (!(y > 0.0 && y < 1.0))
    throw std::domain_error("log_pdf: y must be in (0,1)");
  const double a = d.mu * d.phi;
  const double b = (1.0 - d.mu) * d.phi;
  return log_gamma(d.phi) - log_gamma(a) - log_gamma(b) +
         (a - 1.0) * std::log(y) + (b - 1.0) * std::log1p(-y);
}

std::pair<double, double> mean_var(const BetaMP& d) {
  return {d.mu, d.mu * (1.0 - d.mu) / (1.0 + d.phi)};
}

double sample(const BetaMP& d, RngStream& rng) {
  const double g1 = sample_gamma(d.mu * d.phi, rng);
  const double g2 = sample_gamma((1.0 - d.mu) * d.phi, rng);
  return clamp_unit(g1 / (g1 + g2));
}

}  // namespace barma
