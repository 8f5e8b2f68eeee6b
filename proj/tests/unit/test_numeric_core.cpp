#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "nhspec/error.hpp"
#include "nhspec/numeric_core.hpp"

using namespace nhspec;

namespace {

ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = {d(rng), d(rng)};
  return m;
}

double max_abs_entry(const ComplexMatrix& m) {
  double v = 0.0;
  for (const auto& x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

GridFunction sample(double a, double b, std::size_t n, double (*f)(double)) {
  GridFunction g;
  g.positions = uniform_grid(a, b, n);
  for (double x : g.positions) g.values.emplace_back(f(x), 0.0);
  return g;
}

}  // namespace

TEST_CASE("hessenberg: 2x2 is returned unchanged with identity Q") {
  const auto m = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const auto r = hessenberg_reduce(m);
  CHECK(max_abs_entry(r.h - m) == 0.0);
  CHECK(max_abs_entry(r.q - ComplexMatrix::identity(2)) == 0.0);
}

TEST_CASE("hessenberg: all-ones 3x3") {
  const auto m = ComplexMatrix::from_rows({{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}});
  const auto r = hessenberg_reduce(m);
  CHECK(std::abs(r.h(2, 0)) == 0.0);
  CHECK((r.q * r.h * r.q.adjoint() - m).frobenius_norm() / m.frobenius_norm() < 1e-13);
  // Householder reflection of (1, 1) leaves trace and Frobenius norm invariant.
  CHECK(std::abs(r.h(0, 0) + r.h(1, 1) + r.h(2, 2) - 3.0) < 1e-14);
  CHECK(std::abs(r.h.frobenius_norm() - 3.0) < 1e-14);
}

TEST_CASE("hessenberg: random matrices reconstruct, Q unitary, H Hessenberg") {
  std::mt19937_64 rng(20240501);
  for (std::size_t n : {1u, 5u, 17u, 40u}) {
    const auto m = random_matrix(n, rng);
    const auto r = hessenberg_reduce(m);
    const double fn = m.frobenius_norm();
    CHECK(max_abs_entry(r.q * r.h * r.q.adjoint() - m) < 1e-12 * fn);
    CHECK(max_abs_entry(r.q.adjoint() * r.q - ComplexMatrix::identity(n)) < 1e-12);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j + 1 < i; ++j) CHECK(std::abs(r.h(i, j)) < 1e-14 * fn);
  }
}

TEST_CASE("hessenberg: non-square input is a dimension error") {
  CHECK_THROWS_AS(hessenberg_reduce(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("eig: small closed-form cases") {
  SUBCASE("swap matrix") {
    const auto e = eig_complex_dense(ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(std::abs(e.eigenvalues[0] - cplx(-1.0)) < 1e-14);
    CHECK(std::abs(e.eigenvalues[1] - cplx(1.0)) < 1e-14);
  }
  SUBCASE("asymmetric two-site hopping") {
    const auto e = eig_complex_dense(ComplexMatrix::from_rows({{0.0, 2.0}, {0.5, 0.0}}));
    CHECK(std::abs(e.eigenvalues[0] - cplx(-1.0)) < 1e-14);
    CHECK(std::abs(e.eigenvalues[1] - cplx(1.0)) < 1e-14);
  }
  SUBCASE("three-site uniform chain") {
    const auto e = eig_complex_dense(
        ComplexMatrix::from_rows({{0.0, 1.0, 0.0}, {1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}}));
    const double r2 = std::sqrt(2.0);
    CHECK(std::abs(e.eigenvalues[0] - cplx(-r2)) < 1e-14);
    CHECK(std::abs(e.eigenvalues[1]) < 1e-14);
    CHECK(std::abs(e.eigenvalues[2] - cplx(r2)) < 1e-14);
  }
  SUBCASE("1x1") {
    const auto e = eig_complex_dense(ComplexMatrix::from_rows({{cplx(2.0, -3.0)}}), {true, 8});
    CHECK(e.eigenvalues[0] == cplx(2.0, -3.0));
    CHECK(std::abs(std::abs(e.eigenvectors[0][0]) - 1.0) < 1e-15);
  }
}

TEST_CASE("eig: output sorted by real then imaginary part") {
  const auto m = ComplexMatrix::from_rows({{cplx(1.0, 1.0), 0.0, 0.0},
                                           {0.0, cplx(-2.0, 0.0), 0.0},
                                           {0.0, 0.0, cplx(1.0, -1.0)}});
  const auto e = eig_complex_dense(m);
  CHECK(e.eigenvalues[0] == cplx(-2.0, 0.0));
  CHECK(e.eigenvalues[1] == cplx(1.0, -1.0));
  CHECK(e.eigenvalues[2] == cplx(1.0, 1.0));
}

TEST_CASE("eig: error paths") {
  CHECK_THROWS_AS(eig_complex_dense(ComplexMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(eig_complex_dense(ComplexMatrix(9), {false, 8}), DimensionError);
  auto bad = ComplexMatrix::identity(3);
  bad(1, 2) = std::nan("");
  CHECK_THROWS_AS(eig_complex_dense(bad), InputError);
}

TEST_CASE("eig: random matrices satisfy the residual bound (seed 7)") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {2u, 8u, 33u, 64u, 128u}) {
    const auto m = random_matrix(n, rng);
    const auto e = eig_complex_dense(m, {true, 2048});
    REQUIRE(e.eigenvectors.size() == n);
    const double fn = m.frobenius_norm();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(e.residuals[i] <= 1e-10 * fn);
      double norm2 = 0.0;
      for (const auto& v : e.eigenvectors[i]) norm2 += std::norm(v);
      CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-12);
      // Reported residual is the true one.
      const auto mv = m.apply(e.eigenvectors[i]);
      double r2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) r2 += std::norm(mv[k] - e.eigenvalues[i] * e.eigenvectors[i][k]);
      CHECK(std::abs(std::sqrt(r2) - e.residuals[i]) <= 1e-12 * fn);
    }
  }
}

TEST_CASE("eig: Hermitian input has real eigenvalues (seed 11)") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {4u, 30u, 90u}) {
    const auto a = random_matrix(n, rng);
    ComplexMatrix h(n);
    const auto ah = a.adjoint();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a(i, j) + ah(i, j));
    const auto e = eig_complex_dense(h);
    for (const auto& l : e.eigenvalues) CHECK(std::abs(l.imag()) < 1e-10 * h.frobenius_norm());
  }
}

TEST_CASE("tridiag: closed forms") {
  SUBCASE("three-site chain") {
    const std::vector<double> d{0, 0, 0}, o{1, 1};
    const auto ev = eig_sym_tridiag(d, o);
    CHECK(std::abs(ev[0] + std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(ev[1]) < 1e-14);
    CHECK(std::abs(ev[2] - std::sqrt(2.0)) < 1e-14);
  }
  SUBCASE("1x1") {
    const std::vector<double> d{5}, o{};
    const auto ev = eig_sym_tridiag(d, o);
    REQUIRE(ev.size() == 1);
    CHECK(std::abs(ev[0] - 5.0) < 1e-14);
  }
  SUBCASE("100-site chain, top eigenvalue") {
    const std::vector<double> d(100, 0.0), o(99, 1.0);
    const auto ev = eig_sym_tridiag(d, o);
    CHECK(std::abs(ev.back() - 1.9990325645839761) < 1e-13);
    for (std::size_t n = 1; n <= 100; ++n) {
      CHECK(std::abs(ev[n - 1] + 2.0 * std::cos(n * M_PI / 101.0)) < 1e-13);
    }
  }
  SUBCASE("length mismatch") {
    const std::vector<double> d{0, 0, 0}, o{1};
    CHECK_THROWS_AS(eig_sym_tridiag(d, o), InputError);
  }
}

TEST_CASE("tridiag agrees with the dense solver (seed 3)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {2u, 10u, 57u}) {
    std::vector<double> d(n), o(n - 1);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = d[i] = u(rng);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = o[i] = u(rng);
    const auto a = eig_sym_tridiag(d, o);
    const auto b = eig_complex_dense(m);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b.eigenvalues[i]) < 1e-9);
    CHECK(sturm_count(d, o, a.back() + 1e-8) == n);
    CHECK(sturm_count(d, o, a.front() - 1e-8) == 0);
  }
}

TEST_CASE("grid validation") {
  GridFunction g;
  g.positions = {0.0, 1.0};
  g.values = {1.0, 1.0};
  CHECK_THROWS_AS(validate_grid(g, 3), InputError);
  g.positions = {0.0, 1.0, 2.5};
  g.values = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(validate_grid(g, 3), InputError);
  g.positions = {0.0, 1.0, 2.0};
  g.values = {1.0, 1.0};
  CHECK_THROWS_AS(validate_grid(g, 3), InputError);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), InputError);
}

TEST_CASE("integrate_samples") {
  CHECK(std::abs(integrate_samples(sample(0.0, 1.0, 101, [](double x) { return x * x; })) - 1.0 / 3.0) <= 1e-15);
  CHECK(std::abs(integrate_samples(sample(0.0, M_PI, 201, [](double x) { return std::sin(x); })) - 2.0) < 1e-8);
  CHECK(std::abs(integrate_samples(sample(0.0, 7.5, 10, [](double) { return 1.0; })) - 7.5) < 1e-14);
  // Even point count: Simpson on all but the last interval.
  CHECK(std::abs(integrate_samples(sample(0.0, M_PI, 200, [](double x) { return std::sin(x); })) - 2.0) < 1e-6);
  CHECK_THROWS_AS(integrate_samples(sample(0.0, 1.0, 2, [](double x) { return x; })), InputError);
}

TEST_CASE("integrate_samples is linear (seed 5)") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(0.0, 1.0);
  GridFunction f, g, h;
  f.positions = g.positions = h.positions = uniform_grid(-1.0, 2.0, 64);
  const cplx alpha(0.3, -1.2), beta(-2.0, 0.5);
  for (std::size_t i = 0; i < 64; ++i) {
    f.values.emplace_back(d(rng), d(rng));
    g.values.emplace_back(d(rng), d(rng));
    h.values.push_back(alpha * f.values[i] + beta * g.values[i]);
  }
  const cplx lhs = integrate_samples(h);
  const cplx rhs = alpha * integrate_samples(f) + beta * integrate_samples(g);
  CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("second_derivative") {
  const auto quad = second_derivative(sample(0.0, 1.0, 21, [](double x) { return x * x; }));
  for (std::size_t i = 1; i + 1 < quad.values.size(); ++i) CHECK(std::abs(quad.values[i] - 2.0) < 1e-10);
  const auto flat = second_derivative(sample(0.0, 1.0, 9, [](double) { return 4.0; }));
  for (const auto& v : flat.values) CHECK(std::abs(v) < 1e-12);

  auto max_err = [](std::size_t n) {
    const auto d2 = second_derivative(sample(0.0, 3.0, n, [](double x) { return std::sin(x); }));
    double e = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
      e = std::max(e, std::abs(d2.values[i] + std::sin(d2.positions[i])));
    return e;
  };
  const double ratio = max_err(101) / max_err(201);
  CHECK(ratio > 3.8);
  CHECK(ratio < 4.2);
  CHECK_THROWS_AS(second_derivative(sample(0.0, 1.0, 4, [](double x) { return x; })), InputError);
}

TEST_CASE("first_derivative and cumulative_integral") {
  const auto d1 = first_derivative(sample(0.0, 1.0, 11, [](double x) { return x * x; }));
  for (std::size_t i = 0; i < d1.values.size(); ++i) CHECK(std::abs(d1.values[i] - 2.0 * d1.positions[i]) < 1e-12);

  const auto xs = uniform_grid(0.0, 2.0, 41);
  const auto F = cumulative_integral([](double x) { return cplx(std::cos(x), std::exp(-x)); }, xs);
  CHECK(F[0] == cplx(0.0));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(F[i] - cplx(std::sin(xs[i]), 1.0 - std::exp(-xs[i]))) < 1e-14);
  }
}
