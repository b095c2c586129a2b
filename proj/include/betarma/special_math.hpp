#pragma once

namespace barma {

/// ln Gamma(x) for x > 0.
///
/// Lanczos approximation with g = 7 and the 9-term Godfrey coefficient set,
/// reflection formula below 0.5. Absolute error is below 1e-13 wherever the
/// result is O(1e3); for very large arguments the error is limited by the
/// ~2e-15 relative accuracy of the approximation.
double log_gamma(double x);

/// psi(x) = d/dx ln Gamma(x) for x > 0.
/// Upward recurrence to x >= 10, then the Bernoulli asymptotic series
/// truncated after the x^-12 term (remainder < 1/(12 x^14)).
double digamma(double x);

/// Standard normal CDF, evaluated through erfc.
double normal_cdf(double x);

/// Standard normal quantile for p in (0,1). Acklam's rational approximation
/// refined by one Halley step on the erfc-based CDF; absolute error < 1e-13.
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b), a,b > 0, x in [0,1].
/// Continued fraction (modified Lentz).
double reg_incomplete_beta(double a, double b, double x);

/// Student-t quantile, nu > 0 degrees of freedom, p in (0,1).
double student_t_quantile(double p, double nu);

} // namespace barma
