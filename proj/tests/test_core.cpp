#include <doctest.h>

#include <random>

#include "fockbloch/core.hpp"
#include "oracles.hpp"

using namespace fockbloch;
using doctest::Approx;

TEST_CASE("parametric resonant matrix at cutoff 2") {
  const auto h = build_hamiltonian(ParametricTwoMode{{1.0, 0.0}, 0.0}, 2);
  const Real expected[3][3] = {{0, 1, 0}, {1, 0, 2}, {0, 2, 0}};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(h(r, c) == Complex(expected[r][c], 0.0));
}

TEST_CASE("driven oscillator matrix matches operator construction") {
  const auto h = build_hamiltonian(DrivenOscillator{{1.0, 0.0}, 2.0}, 2);
  CHECK(h.diag == std::vector<Real>{0.0, 2.0, 4.0});
  CHECK(h.upper[0].real() == Approx(1.0));
  CHECK(h.upper[1].real() == Approx(std::sqrt(2.0)));

  const Complex eps = std::polar(0.7, 1.3);
  const auto h2 = build_hamiltonian(DrivenOscillator{eps, 0.4}, 6);
  const auto dense = oracle::driven_hamiltonian(eps, 0.4, 6);
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = 0; c < 7; ++c) CHECK(std::abs(h2(r, c) - dense(r, c)) < 1e-14);
}

TEST_CASE("pair-basis matrix is the two-mode operator restricted to |n,n>") {
  const Complex g = std::polar(1.3, -0.6);
  const int n = 5;
  const auto h = build_hamiltonian(ParametricTwoMode{g, 0.9}, n);
  const auto dense = oracle::two_mode_hamiltonian(g, 0.9, n);
  for (int r = 0; r <= n; ++r)
    for (int c = 0; c <= n; ++c)
      CHECK(std::abs(h(r, c) - dense(oracle::pair_index(r, n), oracle::pair_index(c, n))) < 1e-13);
}

TEST_CASE("two-sided chain with N = 1") {
  const UniformChain chain{0.5, 1.0, true};
  const auto h = build_hamiltonian(chain, 1);
  CHECK(h.diag == std::vector<Real>{-1.0, 0.0, 1.0});
  CHECK(h.upper == std::vector<Complex>{0.5, 0.5});
  CHECK(base_index(chain, 1) == -1);
  CHECK(dimension(chain, 1) == 3);
  CHECK(dimension(UniformChain{1.0, 0.0, false}, 4) == 5);
}

TEST_CASE("random complex couplings give Hermitian matrices") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<Real> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex z(u(rng), u(rng));
    const Real delta = u(rng);
    for (const ChainModel& m : {ChainModel{ParametricTwoMode{z, delta}}, ChainModel{DrivenOscillator{z, delta}}}) {
      const auto h = build_hamiltonian(m, 12);
      for (std::size_t r = 0; r < h.size(); ++r)
        for (std::size_t c = 0; c < h.size(); ++c) CHECK(h(r, c) == std::conj(h(c, r)));
    }
  }
}

TEST_CASE("vacuum states") {
  const auto v3 = initial_vacuum(3);
  CHECK(v3.amplitudes() == std::vector<Complex>{1.0, 0.0, 0.0, 0.0});
  CHECK(initial_vacuum(1).amplitudes().size() == 2);
  const auto v = initial_vacuum(2, -2);
  CHECK(v.amplitudes().size() == 5);
  CHECK(v.at(0) == Complex(1.0));
  CHECK(v.at(-2) == Complex(0.0));
  CHECK(v.cutoff() == 2);
  CHECK(v.norm_squared() == 1.0);
  const auto shaped = initial_vacuum(UniformChain{}, 3);
  CHECK(shaped.base_index() == -3);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(build_hamiltonian(DrivenOscillator{}, 0), ModelError);
  CHECK_THROWS_WITH_AS(validate(ParametricTwoMode{{0.0, 0.0}, 1.0}), doctest::Contains("|G| = 0"), ModelError);
  CHECK_THROWS_AS(validate(DrivenOscillator{{0.0, 0.0}, 1.0}), ModelError);
  CHECK_THROWS_AS(validate(UniformChain{std::nan(""), 0.0, true}), ModelError);
  CHECK_THROWS_AS(StateVector({Complex(1.0)}, 0), ModelError);
  CHECK_THROWS_AS(initial_vacuum(3, 1), ModelError);
}

TEST_CASE("model names and scales") {
  CHECK(model_name(ParametricTwoMode{}) == "parametric");
  CHECK(model_name(DrivenOscillator{}) == "driven");
  CHECK(model_name(UniformChain{}) == "chain");
  CHECK(energy_scale(ParametricTwoMode{{0.0, 3.0}, -1.0}) == Approx(3.0));
}
