#include <algorithm>
#include <cmath>
#include <limits>

#include "nhspec/error.hpp"
#include "nhspec/numeric_core.hpp"

namespace nhspec {

std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag,
                        double x) {
  // Signs of the LDL^T pivots of (T - x I): one negative pivot per eigenvalue
  // below x.
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  std::size_t count = 0;
  double q = diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (q == 0.0) q = tiny;
    q = diag[i] - x - offdiag[i - 1] * offdiag[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> eig_sym_tridiag(std::span<const double> diag,
                                    std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) throw DimensionError("eig_sym_tridiag: empty diagonal");
  if (offdiag.size() + 1 != n)
    throw DimensionError("eig_sym_tridiag: off-diagonal must have length n-1");

  // Gershgorin interval.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(offdiag[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double eps = std::numeric_limits<double>::epsilon();
  lo -= 2.0 * eps * scale + std::numeric_limits<double>::min();
  hi += 2.0 * eps * scale + std::numeric_limits<double>::min();

  const double abs_tol = eps * scale;

  std::vector<double> values(n);
  double left = lo;
  for (std::size_t k = 0; k < n; ++k) {
    // Find the smallest x with count(x) > k; eigenvalue k lies in [a, b).
    double a = left;
    double b = hi;
    while (true) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (b - a <= 2.0 * eps * std::max(std::abs(a), std::abs(b)) + abs_tol) break;
      if (sturm_count(diag, offdiag, mid) > k) {
        b = mid;
      } else {
        a = mid;
      }
    }
    values[k] = 0.5 * (a + b);
    left = a;
  }
  return values;
}

}  // namespace nhspec
