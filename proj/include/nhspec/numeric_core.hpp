#pragma once

// Dense linear algebra, quadrature and finite-difference kernels shared by the
// physics modules. Everything here is a pure function of its arguments.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace nhspec {

using cplx = std::complex<double>;

// Dense complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : ComplexMatrix(n, n) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<cplx>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const cplx> data() const noexcept { return data_; }

  double frobenius_norm() const;
  bool all_finite() const;
  ComplexMatrix adjoint() const;

  // y = M x
  std::vector<cplx> apply(std::span<const cplx> x) const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

struct HessenbergResult {
  ComplexMatrix h;  // upper Hessenberg
  ComplexMatrix q;  // unitary, q * h * q^H == input
};

// Householder reduction to upper Hessenberg form.
HessenbergResult hessenberg_reduce(const ComplexMatrix& m);

struct EigOptions {
  bool want_vectors = false;
  std::size_t max_dimension = 2048;
};

struct EigenDecomposition {
  std::vector<cplx> eigenvalues;
  std::vector<std::vector<cplx>> eigenvectors;  // empty unless requested
  std::vector<double> residuals;                // ||M v - lambda v||, with vectors
};

// All eigenvalues of a general complex matrix: Hessenberg reduction followed
// by Wilkinson-shifted QR. Eigenvectors come from back substitution on the
// Schur factor. Output sorted by real part, then imaginary part.
// Throws ConvergenceError if the iteration exceeds 30*n sweeps.
EigenDecomposition eig_complex_dense(const ComplexMatrix& m,
                                     const EigOptions& opts = {});

// Eigenvalues (ascending) of the real symmetric tridiagonal matrix with the
// given diagonal and off-diagonal, by Sturm-sequence bisection.
std::vector<double> eig_sym_tridiag(std::span<const double> diag,
                                    std::span<const double> offdiag);

// Number of eigenvalues of the tridiagonal matrix strictly less than x.
std::size_t sturm_count(std::span<const double> diag,
                        std::span<const double> offdiag, double x);

// Samples on a uniform, ascending grid.
struct GridFunction {
  std::vector<double> positions;
  std::vector<cplx> values;

  double spacing() const { return positions[1] - positions[0]; }
};

// n equally spaced points on [a, b], endpoints included.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

// Throws InputError unless the grid has >= min_points samples, matching
// lengths and uniform spacing (relative 1e-12).
void validate_grid(const GridFunction& f, std::size_t min_points);

// Composite Simpson; with an even point count the last interval uses the
// trapezoid rule.
cplx integrate_samples(const GridFunction& f);

// Central second difference inside, second-order one-sided at the ends.
GridFunction second_derivative(const GridFunction& f);

// Central first difference inside, second-order one-sided at the ends.
GridFunction first_derivative(const GridFunction& f);

// Running integral F(x_i) = int_{x_0}^{x_i} f(x) dx of a callable integrand,
// five-point Gauss-Legendre on every grid interval.
std::vector<cplx> cumulative_integral(const std::function<cplx(double)>& f,
                                      std::span<const double> positions);

}  // namespace nhspec
