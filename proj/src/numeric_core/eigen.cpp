#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nhspec/error.hpp"
#include "nhspec/numeric_core.hpp"

namespace nhspec {
namespace {

constexpr double kDeflationTol = 1e-14;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Plane rotation G = [[c, s], [-conj(s), c]] with real c.
struct Givens {
  double c = 1.0;
  cplx s = 0.0;
};

// Rotation that maps (a, b) to (r, 0).
Givens make_givens(cplx a, cplx b) {
  const double aa = std::abs(a);
  const double bb = std::abs(b);
  if (bb == 0.0) return {};
  if (aa == 0.0) return {0.0, std::conj(b) / bb};
  const double r = std::hypot(aa, bb);
  return {aa / r, (a / aa) * std::conj(b) / r};
}

// Rows i, j <- G applied from the left, columns [c0, c1).
void rotate_rows(ComplexMatrix& m, const Givens& g, std::size_t i, std::size_t j,
                 std::size_t c0, std::size_t c1) {
  for (std::size_t c = c0; c < c1; ++c) {
    const cplx x = m(i, c);
    const cplx y = m(j, c);
    m(i, c) = g.c * x + g.s * y;
    m(j, c) = -std::conj(g.s) * x + g.c * y;
  }
}

// Columns i, j <- multiplied by G^H from the right, rows [r0, r1).
void rotate_cols(ComplexMatrix& m, const Givens& g, std::size_t i, std::size_t j,
                 std::size_t r0, std::size_t r1) {
  for (std::size_t r = r0; r < r1; ++r) {
    const cplx x = m(r, i);
    const cplx y = m(r, j);
    m(r, i) = x * g.c + y * std::conj(g.s);
    m(r, j) = -x * g.s + y * g.c;
  }
}

// Eigenvalue of the trailing 2x2 block [[a, b], [c, d]] closer to d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx half = 0.5 * (a - d);
  const cplx disc = std::sqrt(half * half + b * c);
  const cplx mid = 0.5 * (a + d);
  const cplx l1 = mid + disc;
  const cplx l2 = mid - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

// One implicit single-shift QR sweep on the active window [lo, hi] of the
// Hessenberg matrix t, updating the full Schur form and accumulating z.
void qr_sweep(ComplexMatrix& t, ComplexMatrix& z, std::size_t lo, std::size_t hi,
              cplx shift) {
  const std::size_t n = t.rows();
  for (std::size_t k = lo; k < hi; ++k) {
    Givens g;
    if (k == lo) {
      g = make_givens(t(lo, lo) - shift, t(lo + 1, lo));
    } else {
      g = make_givens(t(k, k - 1), t(k + 1, k - 1));
    }
    const std::size_t c0 = (k == lo) ? k : k - 1;
    rotate_rows(t, g, k, k + 1, c0, n);
    rotate_cols(t, g, k, k + 1, 0, std::min(k + 3, hi + 1));
    rotate_cols(z, g, k, k + 1, 0, n);
    if (k > lo) t(k + 1, k - 1) = 0.0;
  }
}

bool negligible_subdiag(const ComplexMatrix& t, std::size_t k, double fallback) {
  const double scale = std::abs(t(k - 1, k - 1)) + std::abs(t(k, k));
  const double tol = kDeflationTol * (scale > 0.0 ? scale : fallback);
  return std::abs(t(k, k - 1)) <= tol;
}

// Schur form t = z^H m z of an upper Hessenberg input (t overwritten).
void schur_reduce(ComplexMatrix& t, ComplexMatrix& z) {
  const std::size_t n = t.rows();
  if (n < 2) return;
  const double fallback = std::max(t.frobenius_norm(), std::numeric_limits<double>::min());
  const std::size_t max_sweeps = 30 * n;
  std::size_t sweeps = 0;

  std::size_t hi = n - 1;
  std::size_t its = 0;
  while (true) {
    std::size_t lo = hi;
    while (lo > 0 && !negligible_subdiag(t, lo, fallback)) --lo;
    if (lo > 0) t(lo, lo - 1) = 0.0;

    if (lo == hi) {
      if (hi == 0) break;
      --hi;
      its = 0;
      continue;
    }
    if (sweeps >= max_sweeps) {
      throw ConvergenceError(
          "QR iteration did not converge after " + std::to_string(sweeps) + " sweeps",
          n - 1 - hi);
    }

    cplx shift;
    if (its > 0 && its % 10 == 0) {
      // Exceptional shift to break cycles.
      const double w = std::abs(t(hi, hi - 1)) + (hi >= 2 ? std::abs(t(hi - 1, hi - 2)) : 0.0);
      shift = t(hi, hi) + (its % 20 == 0 ? cplx(0.0, 0.75 * w) : cplx(0.75 * w, 0.0));
    } else {
      shift = wilkinson_shift(t(hi - 1, hi - 1), t(hi - 1, hi), t(hi, hi - 1), t(hi, hi));
    }
    qr_sweep(t, z, lo, hi, shift);
    ++its;
    ++sweeps;
  }
}

// Eigenvector of upper triangular t for the eigenvalue t(k, k), by back
// substitution on (t - lambda I) y = 0 with y_k = 1.
std::vector<cplx> triangular_eigenvector(const ComplexMatrix& t, std::size_t k,
                                         double small) {
  std::vector<cplx> y(k + 1, cplx{});
  y[k] = 1.0;
  const cplx lambda = t(k, k);
  for (std::size_t jj = k; jj-- > 0;) {
    cplx s = 0.0;
    for (std::size_t i = jj + 1; i <= k; ++i) s += t(jj, i) * y[i];
    cplx d = t(jj, jj) - lambda;
    if (std::abs(d) < small) d = small;
    y[jj] = -s / d;
    if (std::abs(y[jj]) > 1e150) {
      for (auto& v : y) v *= 1e-150;
    }
  }
  return y;
}

double vector_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

HessenbergResult hessenberg_reduce(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("hessenberg_reduce: matrix is not square");
  const std::size_t n = m.rows();
  ComplexMatrix h = m;
  ComplexMatrix q = ComplexMatrix::identity(n);
  std::vector<cplx> v(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
    if (tail == 0.0) continue;

    const cplx x0 = h(k + 1, k);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * xnorm;

    // v = x - alpha e1, normalised; reflector P = I - 2 v v^H.
    std::fill(v.begin(), v.end(), cplx{});
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // h <- P h
    for (std::size_t c = k; c < n; ++c) {
      cplx s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, c);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) h(i, c) -= v[i] * s;
    }
    // h <- h P, q <- q P
    for (std::size_t r = 0; r < n; ++r) {
      cplx s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += h(r, i) * v[i];
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) h(r, i) -= s * std::conj(v[i]);

      cplx sq = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) sq += q(r, i) * v[i];
      sq *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) q(r, i) -= sq * std::conj(v[i]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return {std::move(h), std::move(q)};
}

EigenDecomposition eig_complex_dense(const ComplexMatrix& m, const EigOptions& opts) {
  if (!m.is_square()) throw DimensionError("eig_complex_dense: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) throw DimensionError("eig_complex_dense: empty matrix");
  if (n > opts.max_dimension) {
    throw DimensionError("eig_complex_dense: dimension " + std::to_string(n) +
                         " exceeds limit " + std::to_string(opts.max_dimension));
  }
  if (!m.all_finite()) throw InputError("eig_complex_dense: non-finite entry");

  auto [t, z] = hessenberg_reduce(m);
  schur_reduce(t, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const cplx x = t(a, a);
    const cplx y = t(b, b);
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  EigenDecomposition out;
  out.eigenvalues.reserve(n);
  for (std::size_t k : order) out.eigenvalues.push_back(t(k, k));
  if (!opts.want_vectors) return out;

  const double tnorm = t.frobenius_norm();
  const double small = kEps * std::max(tnorm, std::numeric_limits<double>::min());
  out.eigenvectors.reserve(n);
  out.residuals.reserve(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t k = order[idx];
    const auto y = triangular_eigenvector(t, k, small);
    std::vector<cplx> v(n, cplx{});
    for (std::size_t r = 0; r < n; ++r) {
      cplx s = 0.0;
      for (std::size_t i = 0; i <= k; ++i) s += z(r, i) * y[i];
      v[r] = s;
    }
    const double vn = vector_norm(v);
    for (auto& x : v) x /= vn;

    const cplx lambda = out.eigenvalues[idx];
    auto mv = m.apply(v);
    for (std::size_t r = 0; r < n; ++r) mv[r] -= lambda * v[r];
    out.residuals.push_back(vector_norm(mv));
    out.eigenvectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace nhspec
