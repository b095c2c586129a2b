#pragma once

#include <limits>
#include <string>

namespace barma {

/// Link functions g : (0,1) -> R. All three are strictly monotone and twice
/// differentiable on the open unit interval.
enum class LinkKind { logit, probit, cloglog };

LinkKind link_from_name(const std::string& name);
std::string link_name(LinkKind k);

/// Open-interval clamp shared by link_inv and the beta sampler: values are
/// kept inside [eps, 1-eps] so downstream log terms stay finite.
inline constexpr double kUnitEps = 10.0 * std::numeric_limits<double>::epsilon();

double clamp_unit(double y);

/// g(mu); mu outside (0,1) raises a domain error.
double link(LinkKind k, double mu);

/// g^{-1}(eta); extreme eta saturates into the clamped open interval.
double link_inv(LinkKind k, double eta);

/// dg/dmu; strictly positive on (0,1).
double link_deriv(LinkKind k, double mu);

}  // namespace barma
