#include <algorithm>
#include <cmath>

#include "fockbloch/kernels.hpp"
#include "kernels_detail.hpp"

namespace fockbloch::kernels {

std::string to_string(Backend backend) { return backend == Backend::Serial ? "serial" : "openmp"; }

Backend backend_from_string(const std::string& name) {
  if (name == "serial") return Backend::Serial;
  if (name == "openmp" || name == "omp") return Backend::OpenMP;
  throw ModelError("unknown kernel backend '" + name + "'");
}

namespace serial {

void schrodinger_rhs(const Tridiagonal& h, std::span<const Complex> y, std::span<Complex> out) {
  const std::size_t n = y.size();
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = h.diag[k] * y[k];
    if (k + 1 < n) acc += h.upper[k] * y[k + 1];
    if (k > 0) acc += std::conj(h.upper[k - 1]) * y[k - 1];
    out[k] = Complex(acc.imag(), -acc.real());
  }
}

void stage_combination(std::span<const Complex> y, Real step, std::span<const Real> coeffs,
                       std::span<const Complex* const> stages, std::span<Complex> out) {
  const std::size_t n = y.size();
  detail::dispatch_stages(coeffs.size(), [&]<std::size_t M>() {
    for (std::size_t k = 0; k < n; ++k) out[k] = y[k] + step * detail::weighted_sum<M>(coeffs, stages, k);
  });
}

Real scaled_error(std::span<const Complex> y, std::span<const Complex> y_new, Real step,
                  std::span<const Real> coeffs, std::span<const Complex* const> stages, Real atol, Real rtol) {
  const std::size_t n = y.size();
  Real worst = 0.0;
  detail::dispatch_stages(coeffs.size(), [&]<std::size_t M>() {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex acc = detail::weighted_sum<M>(coeffs, stages, k);
      const Real scale = atol + rtol * std::max(std::abs(y[k]), std::abs(y_new[k]));
      worst = std::max(worst, std::abs(step * acc) / scale);
    }
  });
  return worst;
}

Real norm_squared(std::span<const Complex> y) {
  Real sum = 0.0;
  for (const auto& c : y) sum += std::norm(c);
  return sum;
}

}  // namespace serial

void schrodinger_rhs(Backend b, const Tridiagonal& h, std::span<const Complex> y, std::span<Complex> out) {
  b == Backend::Serial ? serial::schrodinger_rhs(h, y, out) : omp::schrodinger_rhs(h, y, out);
}

void stage_combination(Backend b, std::span<const Complex> y, Real step, std::span<const Real> coeffs,
                       std::span<const Complex* const> stages, std::span<Complex> out) {
  b == Backend::Serial ? serial::stage_combination(y, step, coeffs, stages, out)
                       : omp::stage_combination(y, step, coeffs, stages, out);
}

Real scaled_error(Backend b, std::span<const Complex> y, std::span<const Complex> y_new, Real step,
                  std::span<const Real> coeffs, std::span<const Complex* const> stages, Real atol, Real rtol) {
  return b == Backend::Serial ? serial::scaled_error(y, y_new, step, coeffs, stages, atol, rtol)
                              : omp::scaled_error(y, y_new, step, coeffs, stages, atol, rtol);
}

Real norm_squared(Backend b, std::span<const Complex> y) {
  return b == Backend::Serial ? serial::norm_squared(y) : omp::norm_squared(y);
}

}  // namespace fockbloch::kernels
