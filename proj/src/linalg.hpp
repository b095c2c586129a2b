#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Small dense helpers for the k x k problems of this library (k <= 16).
// Row-major storage throughout.

namespace barma::detail {

// Solve A x = b in place by Gaussian elimination with partial pivoting.
// Returns false when a pivot falls below tol * max|A|.
inline bool solve_inplace(std::vector<double> a, std::vector<double> b,
                          std::vector<double>& x, std::size_t n,
                          double tol = 1e-12) {
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::fabs(v));
  if (amax == 0.0) return false;

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
    if (std::fabs(a[piv * n + c]) < tol * amax) return false;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    const double d = a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / d;
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      b[r] -= f * b[c];
    }
  }

  x.assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t j = ri + 1; j < n; ++j) s -= a[ri * n + j] * x[j];
    x[ri] = s / a[ri * n + ri];
  }
  return true;
}

// Inverse via column-by-column solves; returns empty vector when singular.
inline std::vector<double> invert(const std::vector<double>& a, std::size_t n,
                                  double tol = 1e-12) {
  std::vector<double> inv(n * n, 0.0);
  std::vector<double> e(n), col;
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    if (!solve_inplace(a, e, col, n, tol)) return {};
    for (std::size_t r = 0; r < n; ++r) inv[r * n + c] = col[r];
  }
  return inv;
}

}  // namespace barma::detail
