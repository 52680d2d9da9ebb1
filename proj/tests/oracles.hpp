#pragma once
// Reference values computed without the library's own formulas.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "fockbloch/core.hpp"

namespace oracle {

using fockbloch::Complex;
using fockbloch::Real;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline constexpr Real kPi = std::numbers::pi;

/// Truncated annihilation operator on levels 0..n.
inline MatrixXcd annihilation(int n) {
  MatrixXcd a = MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) a(k - 1, k) = std::sqrt(static_cast<Real>(k));
  return a;
}

/// Driven oscillator delta a^dag a + eps a^dag + eps^* a, levels 0..n.
inline MatrixXcd driven_hamiltonian(Complex eps, Real delta, int n) {
  const MatrixXcd a = annihilation(n);
  const MatrixXcd ad = a.adjoint();
  return delta * ad * a + eps * ad + std::conj(eps) * a;
}

/// Two-mode pump (delta/2)(a^dag a + b^dag b) + G a^dag b^dag + G^* a b on (n+1)^2 levels.
inline MatrixXcd two_mode_hamiltonian(Complex g, Real delta, int n) {
  const MatrixXcd a1 = annihilation(n);
  const MatrixXcd id = MatrixXcd::Identity(n + 1, n + 1);
  const MatrixXcd a = Eigen::kroneckerProduct(a1, id);
  const MatrixXcd b = Eigen::kroneckerProduct(id, a1);
  const MatrixXcd num = a.adjoint() * a + b.adjoint() * b;
  return 0.5 * delta * num + g * a.adjoint() * b.adjoint() + std::conj(g) * a * b;
}

inline int pair_index(int n, int levels) { return n * (levels + 1) + n; }

/// Site-energy ladder with hopping beta on sites lo..hi.
inline MatrixXcd chain_hamiltonian(Real beta, Real delta, int lo, int hi) {
  const int dim = hi - lo + 1;
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    h(k, k) = delta * (lo + k);
    if (k + 1 < dim) h(k, k + 1) = h(k + 1, k) = beta;
  }
  return h;
}

inline VectorXcd evolve(const MatrixXcd& h, const VectorXcd& psi0, Real t) {
  const MatrixXcd u = (Complex(0.0, -t) * h).exp();
  return u * psi0;
}

inline Real resonant_pn(Real g_abs, int n, Real t) {
  const Real th = std::tanh(g_abs * t);
  const Real ch = std::cosh(g_abs * t);
  return std::pow(th, 2 * n) / (ch * ch);
}

/// Geometric pair statistics with a complex beta0 = sqrt(delta^2/4 - |G|^2).
inline Real detuned_pn(Complex g, Real delta, int n, Real t) {
  const Complex b0 = std::sqrt(Complex(delta * delta / 4.0 - std::norm(g), 0.0));
  const Complex s = std::abs(b0) < 1e-300 ? Complex(t, 0.0) : std::sin(b0 * t) / b0;
  const Real x = std::norm(g) * std::norm(s);
  return std::pow(x, n) / std::pow(1.0 + x, n + 1);
}

inline Real poisson(Real mean, int n) {
  Real p = std::exp(-mean);
  for (int k = 1; k <= n; ++k) p *= mean / k;
  return p;
}

/// Mean photon number of the driven oscillator: (2|eps|/delta)^2 sin^2(delta t/2), or |eps|^2 t^2.
inline Real driven_mean(Complex eps, Real delta, Real t) {
  if (delta == 0.0) return std::norm(eps) * t * t;
  const Real s = 2.0 * std::abs(eps) / delta * std::sin(0.5 * delta * t);
  return s * s;
}

inline Real driven_pn(Complex eps, Real delta, int n, Real t) { return poisson(driven_mean(eps, delta, t), n); }

/// Golden-section maximizer on [a, b].
inline std::pair<Real, Real> golden_max(const std::function<Real(Real)>& f, Real a, Real b, Real tol = 1e-12) {
  const Real r = (std::sqrt(5.0) - 1.0) / 2.0;
  Real c = b - r * (b - a), d = a + r * (b - a);
  Real fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const Real x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace oracle
