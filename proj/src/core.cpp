#include "fockbloch/core.hpp"

#include <algorithm>
#include <cmath>

namespace fockbloch {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void validate(const ChainModel& model) {
  std::visit(Overloaded{
                 [](const UniformChain& m) {
                   if (!std::isfinite(m.beta) || !std::isfinite(m.delta))
                     throw ModelError("uniform chain: non-finite rate");
                 },
                 [](const ParametricTwoMode& m) {
                   if (!finite(m.g) || !std::isfinite(m.delta))
                     throw ModelError("parametric: non-finite rate");
                   if (std::abs(m.g) == 0.0) throw ModelError("parametric: zero pump coupling |G| = 0");
                 },
                 [](const DrivenOscillator& m) {
                   if (!finite(m.epsilon) || !std::isfinite(m.delta))
                     throw ModelError("driven oscillator: non-finite rate");
                   if (std::abs(m.epsilon) == 0.0) throw ModelError("driven oscillator: zero drive |epsilon| = 0");
                 },
             },
             model);
}

std::string model_name(const ChainModel& model) {
  return std::visit(Overloaded{
                        [](const UniformChain&) { return std::string("chain"); },
                        [](const ParametricTwoMode&) { return std::string("parametric"); },
                        [](const DrivenOscillator&) { return std::string("driven"); },
                    },
                    model);
}

Real energy_scale(const ChainModel& model) {
  return std::visit(Overloaded{
                        [](const UniformChain& m) { return std::max(std::abs(m.beta), std::abs(m.delta)); },
                        [](const ParametricTwoMode& m) { return std::max(std::abs(m.g), std::abs(m.delta)); },
                        [](const DrivenOscillator& m) { return std::max(std::abs(m.epsilon), std::abs(m.delta)); },
                    },
                    model);
}

int base_index(const ChainModel& model, std::size_t cutoff) {
  if (const auto* chain = std::get_if<UniformChain>(&model); chain && chain->two_sided)
    return -static_cast<int>(cutoff);
  return 0;
}

std::size_t dimension(const ChainModel& model, std::size_t cutoff) {
  return static_cast<std::size_t>(static_cast<int>(cutoff) - base_index(model, cutoff)) + 1;
}

Complex Tridiagonal::operator()(std::size_t row, std::size_t col) const {
  if (row == col) return diag[row];
  if (col == row + 1) return upper[row];
  if (row == col + 1) return std::conj(upper[col]);
  return {};
}

Tridiagonal build_hamiltonian(const ChainModel& model, std::size_t cutoff) {
  if (cutoff == 0) throw ModelError("degenerate truncation: cutoff must be >= 1");
  validate(model);

  const std::size_t dim = dimension(model, cutoff);
  const int base = base_index(model, cutoff);
  Tridiagonal h;
  h.diag.resize(dim);
  h.upper.resize(dim - 1);

  std::visit(Overloaded{
                 [&](const UniformChain& m) {
                   for (std::size_t k = 0; k < dim; ++k) h.diag[k] = (base + static_cast<int>(k)) * m.delta;
                   std::fill(h.upper.begin(), h.upper.end(), Complex(m.beta, 0.0));
                 },
                 [&](const ParametricTwoMode& m) {
                   // <n,n|G a^+ b^+|n-1,n-1> = G n, so H[n][n-1] = G n and H[n-1][n] = G* n.
                   for (std::size_t n = 0; n < dim; ++n) h.diag[n] = static_cast<Real>(n) * m.delta;
                   for (std::size_t n = 0; n + 1 < dim; ++n) h.upper[n] = std::conj(m.g) * static_cast<Real>(n + 1);
                 },
                 [&](const DrivenOscillator& m) {
                   for (std::size_t n = 0; n < dim; ++n) h.diag[n] = static_cast<Real>(n) * m.delta;
                   for (std::size_t n = 0; n + 1 < dim; ++n)
                     h.upper[n] = std::conj(m.epsilon) * std::sqrt(static_cast<Real>(n + 1));
                 },
             },
             model);
  return h;
}

StateVector::StateVector(std::vector<Complex> amplitudes, int base_index)
    : amplitudes_(std::move(amplitudes)), base_index_(base_index) {
  if (amplitudes_.size() < 2) throw ModelError("state vector needs cutoff >= 1");
}

Real StateVector::norm_squared() const {
  Real sum = 0.0;
  for (const auto& c : amplitudes_) sum += std::norm(c);
  return sum;
}

Complex StateVector::at(int index) const {
  if (index < base_index_ || index > cutoff()) return {};
  return amplitudes_[static_cast<std::size_t>(index - base_index_)];
}

StateVector initial_vacuum(std::size_t cutoff, int base) {
  if (cutoff == 0) throw ModelError("degenerate truncation: cutoff must be >= 1");
  if (base > 0) throw ModelError("vacuum window must contain index 0");
  std::vector<Complex> amps(static_cast<std::size_t>(static_cast<int>(cutoff) - base) + 1);
  amps[static_cast<std::size_t>(-base)] = 1.0;
  return StateVector(std::move(amps), base);
}

StateVector initial_vacuum(const ChainModel& model, std::size_t cutoff) {
  return initial_vacuum(cutoff, base_index(model, cutoff));
}

}  // namespace fockbloch
