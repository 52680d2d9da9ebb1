#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fockbloch {

using Real = double;
using Complex = std::complex<double>;

// hbar = 1: every energy is an angular frequency, every rate an inverse time.

/// Thrown for invalid parameters or degenerate configurations.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tight-binding chain  i dC_n/dt = n*delta*C_n + beta*(C_{n+1} + C_{n-1}).
struct UniformChain {
  Real beta = 1.0;
  Real delta = 0.0;
  bool two_sided = true;  // sites -N..N instead of 0..N
};

/// Two-mode parametric amplifier restricted to the pair ladder |n,n>.
struct ParametricTwoMode {
  Complex g{1.0, 0.0};
  Real delta = 0.0;
};

/// Single mode driven by a detuned classical field.
struct DrivenOscillator {
  Complex epsilon{1.0, 0.0};
  Real delta = 0.0;
};

using ChainModel = std::variant<UniformChain, ParametricTwoMode, DrivenOscillator>;

/// Throws ModelError if a rate is non-finite or the drive/coupling vanishes.
void validate(const ChainModel& model);

std::string model_name(const ChainModel& model);

/// Largest of the model's rate parameters; used as an energy scale.
Real energy_scale(const ChainModel& model);

/// Lowest site index represented for a given cutoff: -N for a two-sided chain, else 0.
int base_index(const ChainModel& model, std::size_t cutoff);

/// Number of retained amplitudes for a cutoff (2N+1 for two-sided chains, N+1 otherwise).
std::size_t dimension(const ChainModel& model, std::size_t cutoff);

/// Hermitian tridiagonal matrix. `upper[k]` is H[k][k+1]; H[k+1][k] is its conjugate.
struct Tridiagonal {
  std::vector<Real> diag;
  std::vector<Complex> upper;

  std::size_t size() const { return diag.size(); }
  Complex operator()(std::size_t row, std::size_t col) const;
};

/// Truncated Hamiltonian. For Fock models rows are n = 0..cutoff; for
/// two-sided chains rows are sites -cutoff..cutoff.
Tridiagonal build_hamiltonian(const ChainModel& model, std::size_t cutoff);

class StateVector {
 public:
  StateVector(std::vector<Complex> amplitudes, int base_index);

  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  std::vector<Complex>& amplitudes() { return amplitudes_; }
  int base_index() const { return base_index_; }
  /// Highest retained index N.
  int cutoff() const { return base_index_ + static_cast<int>(amplitudes_.size()) - 1; }

  Real norm_squared() const;
  /// Amplitude at a site index, zero outside the window.
  Complex at(int index) const;

 private:
  std::vector<Complex> amplitudes_;
  int base_index_;
};

/// All amplitude in site/Fock index 0 on the window base..cutoff (base <= 0 < cutoff).
StateVector initial_vacuum(std::size_t cutoff, int base = 0);

/// Vacuum shaped to the model's truncation window.
StateVector initial_vacuum(const ChainModel& model, std::size_t cutoff);

/// Trapped-ion Raman configuration; maps onto a DrivenOscillator.
struct IonRamanParams {
  Real omega1 = 0.0;
  Real omega2 = 0.0;
  Real nu = 1.0;
  Complex e1{1.0, 0.0};
  Complex e2{1.0, 0.0};
  Real kappa = 1.0;
};

}  // namespace fockbloch
