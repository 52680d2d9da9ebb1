#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "fockbloch/core.hpp"

namespace fockbloch::kernels::detail {

// sum_j coeffs[j] * stages[j][k] with the stage count fixed at compile time.
template <std::size_t M>
inline Complex weighted_sum(std::span<const Real> coeffs, std::span<const Complex* const> stages, std::size_t k) {
  Real re = 0.0;
  Real im = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    re += coeffs[j] * stages[j][k].real();
    im += coeffs[j] * stages[j][k].imag();
  }
  return {re, im};
}

template <class F>
inline void dispatch_stages(std::size_t m, F&& body) {
  switch (m) {
    case 1: body.template operator()<1>(); break;
    case 2: body.template operator()<2>(); break;
    case 3: body.template operator()<3>(); break;
    case 4: body.template operator()<4>(); break;
    case 5: body.template operator()<5>(); break;
    case 6: body.template operator()<6>(); break;
    case 7: body.template operator()<7>(); break;
    default: throw ModelError("stage combination supports 1..7 stages");
  }
}

}  // namespace fockbloch::kernels::detail
