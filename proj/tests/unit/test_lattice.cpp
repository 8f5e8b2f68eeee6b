#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nhspec/diagnostics.hpp"
#include "nhspec/error.hpp"
#include "nhspec/lattice.hpp"

using namespace nhspec;
using namespace nhspec::lattice;

namespace {

LatticeModel chain(double gamma, std::size_t n, Boundary bc, double j0 = 0.0) {
  return {1.0, gamma, j0, n, bc};
}

}  // namespace

TEST_CASE("build_hamiltonian: coefficients") {
  const auto h = build_hamiltonian(chain(0.1, 3, Boundary::open));
  CHECK(std::abs(h(0, 1) - 1.1618342427282831) < 1e-15);
  CHECK(std::abs(h(1, 0) - 0.86070797642505781) < 1e-15);
  CHECK(std::abs(h(1, 2) - 1.2840254166877415) < 1e-15);
  CHECK(std::abs(h(2, 1) - 0.77880078307140487) < 1e-15);
  CHECK(h(0, 2) == cplx(0.0));
  CHECK(h(0, 0) == cplx(0.0));

  const auto herm = build_hamiltonian({2.5, 0.0, 0.0, 6, Boundary::open});
  for (std::size_t i = 0; i + 1 < 6; ++i) {
    CHECK(herm(i, i + 1) == cplx(2.5));
    CHECK(herm(i + 1, i) == cplx(2.5));
  }
}

TEST_CASE("build_hamiltonian: periodic wrap bond") {
  const auto h = build_hamiltonian(chain(0.005, 100, Boundary::periodic));
  CHECK(std::abs(h(99, 0) - 1.6528482304270793) < 1e-14);
  CHECK(std::abs(h(0, 99) - 0.60501622689314318) < 1e-15);
  const auto two = build_hamiltonian(chain(0.0, 2, Boundary::periodic));
  CHECK(two(0, 1) == cplx(2.0));
  CHECK(two(1, 0) == cplx(2.0));
}

TEST_CASE("lattice: validation and overflow guard") {
  CHECK_THROWS_AS(build_hamiltonian(chain(0.0, 1, Boundary::open)), InputError);
  CHECK_THROWS_AS(build_hamiltonian({0.0, 0.1, 0.0, 4, Boundary::open}), InputError);
  CHECK_THROWS_AS(build_hamiltonian(chain(8.0, 100, Boundary::open)), ParameterRangeError);
  CHECK_THROWS_AS(analytic_state(chain(0.0, 10, Boundary::open), 0), InputError);
  CHECK_THROWS_AS(analytic_state(chain(0.0, 10, Boundary::open), 11), InputError);
}

TEST_CASE("analytic_energies") {
  const auto obc = analytic_energies(chain(0.005, 100, Boundary::open));
  CHECK(obc.size() == 100);
  CHECK(std::abs(obc.entries.back().energy - 1.9990325645839761) < 1e-14);
  CHECK(max_abs_imag(obc) == 0.0);

  // n = N (k = 0) of the ring; imaginary shift gamma (j0 - (N + 2) / 2).
  const auto model = chain(0.005, 100, Boundary::periodic);
  CHECK(pbc_imaginary_shift(model) == doctest::Approx(-0.255));
  const auto pbc = analytic_energies(model);
  CHECK(std::abs(pbc.entries.back().energy - 2.0653781188339709) < 1e-14);

  const auto herm = analytic_energies(chain(0.0, 12, Boundary::periodic));
  for (const auto& e : herm.entries) {
    CHECK(e.energy.imag() == 0.0);
    CHECK(std::abs(e.energy.real() - 2.0 * std::cos(2 * std::numbers::pi * e.index / 12.0)) < 1e-14);
  }
}

TEST_CASE("analytic states solve the lattice equation") {
  for (Boundary bc : {Boundary::open, Boundary::periodic}) {
    for (double g : {-0.005, 0.0, 0.005, 0.05}) {
      for (double j0 : {0.0, 37.5}) {
        const auto model = LatticeModel{1.3, g, j0, 60, bc};
        for (int n = 1; n <= 60; ++n) {
          const auto st = analytic_state(model, n);
          CHECK(lattice_residual(model, st.state, st.energy) < 1e-10);
          CHECK(std::abs(l2_norm(st.state) - 1.0) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("analytic states: pinning") {
  CHECK(diagnostics::pinning_position(analytic_state(chain(0.005, 100, Boundary::open), 13).state) <= 10.0);
  CHECK(diagnostics::pinning_position(analytic_state(chain(-0.005, 100, Boundary::open), 13).state) >= 91.0);
  const auto ring = analytic_state(chain(0.005, 100, Boundary::periodic), 13).state;
  CHECK(diagnostics::pinning_position(ring) == 51.0);
  CHECK(diagnostics::envelope_fit(ring).center == doctest::Approx(51.0).epsilon(1e-9));
  const auto plain = analytic_state(chain(0.0, 20, Boundary::open), 1).state;
  for (std::size_t j = 0; j < 20; ++j) {
    CHECK(std::abs(std::abs(plain.amplitudes[j]) / std::abs(plain.amplitudes[0]) -
                   std::sin((j + 1) * std::numbers::pi / 21.0) / std::sin(std::numbers::pi / 21.0)) < 1e-12);
  }
}

TEST_CASE("similarity_scale") {
  const auto s = similarity_scale(chain(0.005, 6, Boundary::open));
  CHECK(s[0] == 1.5);
  CHECK(s[1] == 3.0);
  CHECK(s[2] == 5.5);
  CHECK(s[3] == 9.0);
  CHECK(similarity_scale(chain(0.7, 6, Boundary::open)) == s);
  const auto shifted = similarity_scale(chain(0.0, 6, Boundary::open, 2.25));
  for (std::size_t j = 1; j < 6; ++j) CHECK(shifted[j] - shifted[j - 1] == doctest::Approx(j - 2.25 + 0.5));
  CHECK(shifted[0] == doctest::Approx(1.0 - 2.25 + 0.5));
}

TEST_CASE("hermitize") {
  const auto small = hermitize(chain(0.1, 3, Boundary::open));
  CHECK(std::abs(small.offdiag[0] - 1.0) < 1e-15);
  CHECK(std::abs(small.offdiag[1] - 1.0) < 1e-15);
  const auto plain = hermitize({1.7, 0.0, 0.0, 5, Boundary::open});
  for (double o : plain.offdiag) CHECK(o == 1.7);
  for (double d : plain.diag) CHECK(d == 0.0);
  CHECK_THROWS_AS(hermitize(chain(0.1, 3, Boundary::periodic)), InputError);

  const auto model = chain(0.005, 100, Boundary::open);
  const auto an = analytic_energies(model);
  const auto hs = hermitized_spectrum(model);
  CHECK(compare_spectra(an, hs) < 1e-10);
  CHECK(max_abs_imag(hs) == 0.0);
  CHECK(compare_spectra(hs, hermitized_spectrum(chain(0.05, 100, Boundary::open))) < 1e-10);
}

TEST_CASE("numeric_spectrum") {
  const auto three = numeric_spectrum(chain(0.3, 3, Boundary::open));
  CHECK(std::abs(three.entries[0].energy + std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(three.entries[1].energy) < 1e-9);
  CHECK(std::abs(three.entries[2].energy - std::sqrt(2.0)) < 1e-9);

  const auto obc = chain(0.005, 100, Boundary::open);
  const auto num = numeric_spectrum(obc);
  CHECK(max_abs_imag(num) < 1e-4);
  CHECK(compare_spectra(analytic_energies(obc), num) < 1e-4);

  const auto ring = chain(0.0, 64, Boundary::periodic);
  CHECK(compare_spectra(analytic_energies(ring), numeric_spectrum(ring)) < 1e-10);

  for (double g : {0.005, -0.005}) {
    const auto m = chain(g, 100, Boundary::periodic);
    CHECK(compare_spectra(analytic_energies(m), numeric_spectrum(m)) < 1e-6);
  }
  CHECK_THROWS_AS(numeric_spectrum(chain(0.0, 100, Boundary::open), {false, 50}), DimensionError);
}

TEST_CASE("numeric eigenpairs meet the solver tolerance") {
  const auto model = chain(0.02, 80, Boundary::periodic);
  const auto h = build_hamiltonian(model);
  const auto e = numeric_eigenpairs(model);
  for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
    WaveField wf;
    wf.sampling = Sampling::sites;
    for (std::size_t j = 0; j < 80; ++j) wf.positions.push_back(j + 1.0);
    wf.amplitudes = e.eigenvectors[i];
    CHECK(lattice_residual(model, wf, e.eigenvalues[i]) < 1e-10 * h.frobenius_norm());
  }
}

TEST_CASE("lattice_residual: random vector is rejected (seed 9)") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d(0.0, 1.0);
  const auto model = chain(0.005, 50, Boundary::open);
  WaveField wf;
  wf.sampling = Sampling::sites;
  for (std::size_t j = 0; j < 50; ++j) {
    wf.positions.push_back(j + 1.0);
    wf.amplitudes.emplace_back(d(rng), d(rng));
  }
  CHECK(lattice_residual(model, wf, 0.0) > 0.5);
  wf.amplitudes.pop_back();
  CHECK_THROWS_AS(lattice_residual(model, wf, 0.0), InputError);
}

TEST_CASE("compare_spectra") {
  const auto s = analytic_energies(chain(0.01, 10, Boundary::periodic));
  CHECK(compare_spectra(s, s) == 0.0);
  CHECK_THROWS_AS(compare_spectra(s, analytic_energies(chain(0.01, 11, Boundary::periodic))), InputError);
}
