#pragma once

// Vector kernels behind the Runge-Kutta propagator. Every kernel exists as a
// serial reference and an OpenMP version with identical arithmetic per element;
// reductions may differ in summation order only.

#include <span>
#include <string>

#include "fockbloch/core.hpp"

namespace fockbloch::kernels {

enum class Backend { Serial, OpenMP };

std::string to_string(Backend backend);
Backend backend_from_string(const std::string& name);

/// Threads OpenMP would use (1 when built without OpenMP).
int max_threads();

namespace serial {

/// out = -i H y
void schrodinger_rhs(const Tridiagonal& h, std::span<const Complex> y, std::span<Complex> out);
/// out = y + step * sum_j coeffs[j] * stages[j]
void stage_combination(std::span<const Complex> y, Real step, std::span<const Real> coeffs,
                       std::span<const Complex* const> stages, std::span<Complex> out);
/// max_i |step * sum_j coeffs[j] stages[j][i]| / (atol + rtol * max(|y_i|, |y_new_i|))
Real scaled_error(std::span<const Complex> y, std::span<const Complex> y_new, Real step,
                  std::span<const Real> coeffs, std::span<const Complex* const> stages, Real atol, Real rtol);
Real norm_squared(std::span<const Complex> y);

}  // namespace serial

namespace omp {

void schrodinger_rhs(const Tridiagonal& h, std::span<const Complex> y, std::span<Complex> out);
void stage_combination(std::span<const Complex> y, Real step, std::span<const Real> coeffs,
                       std::span<const Complex* const> stages, std::span<Complex> out);
Real scaled_error(std::span<const Complex> y, std::span<const Complex> y_new, Real step,
                  std::span<const Real> coeffs, std::span<const Complex* const> stages, Real atol, Real rtol);
Real norm_squared(std::span<const Complex> y);

}  // namespace omp

// Backend dispatch.
void schrodinger_rhs(Backend b, const Tridiagonal& h, std::span<const Complex> y, std::span<Complex> out);
void stage_combination(Backend b, std::span<const Complex> y, Real step, std::span<const Real> coeffs,
                       std::span<const Complex* const> stages, std::span<Complex> out);
Real scaled_error(Backend b, std::span<const Complex> y, std::span<const Complex> y_new, Real step,
                  std::span<const Real> coeffs, std::span<const Complex* const> stages, Real atol, Real rtol);
Real norm_squared(Backend b, std::span<const Complex> y);

}  // namespace fockbloch::kernels
