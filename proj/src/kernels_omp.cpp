#include <algorithm>
#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fockbloch/kernels.hpp"
#include "kernels_detail.hpp"

namespace fockbloch::kernels {

// Below this length a parallel region costs more than the loop.
constexpr std::int64_t kParallelThreshold = 2048;

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

void schrodinger_rhs(const Tridiagonal& h, std::span<const Complex> y, std::span<Complex> out) {
  const auto n = static_cast<std::int64_t>(y.size());
  const Real* diag = h.diag.data();
  const Complex* upper = h.upper.data();
  const Complex* in = y.data();
  Complex* res = out.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::int64_t k = 0; k < n; ++k) {
    Complex acc = diag[k] * in[k];
    if (k + 1 < n) acc += upper[k] * in[k + 1];
    if (k > 0) acc += std::conj(upper[k - 1]) * in[k - 1];
    res[k] = Complex(acc.imag(), -acc.real());
  }
}

void stage_combination(std::span<const Complex> y, Real step, std::span<const Real> coeffs,
                       std::span<const Complex* const> stages, std::span<Complex> out) {
  const auto n = static_cast<std::int64_t>(y.size());
  detail::dispatch_stages(coeffs.size(), [&]<std::size_t M>() {
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::int64_t k = 0; k < n; ++k) out[k] = y[k] + step * detail::weighted_sum<M>(coeffs, stages, k);
  });
}

Real scaled_error(std::span<const Complex> y, std::span<const Complex> y_new, Real step,
                  std::span<const Real> coeffs, std::span<const Complex* const> stages, Real atol, Real rtol) {
  const auto n = static_cast<std::int64_t>(y.size());
  Real worst = 0.0;
  detail::dispatch_stages(coeffs.size(), [&]<std::size_t M>() {
#pragma omp parallel for schedule(static) reduction(max : worst) if (n >= kParallelThreshold)
    for (std::int64_t k = 0; k < n; ++k) {
      const Complex acc = detail::weighted_sum<M>(coeffs, stages, k);
      const Real scale = atol + rtol * std::max(std::abs(y[k]), std::abs(y_new[k]));
      worst = std::max(worst, std::abs(step * acc) / scale);
    }
  });
  return worst;
}

Real norm_squared(std::span<const Complex> y) {
  const auto n = static_cast<std::int64_t>(y.size());
  Real sum = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum) if (n >= kParallelThreshold)
  for (std::int64_t k = 0; k < n; ++k) sum += std::norm(y[k]);
  return sum;
}

}  // namespace omp

}  // namespace fockbloch::kernels
