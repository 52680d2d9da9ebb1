#include "fockbloch/analytic.hpp"

#include <cmath>
#include <numbers>

namespace fockbloch::analytic {

namespace {

constexpr Real kSeriesCut = 1e-8;
constexpr Real kPi = std::numbers::pi;

// x^n / (1+x)^{n+1}: geometric weight with mean x.
Real geometric_weight(Real x, int n) {
  if (n < 0) return 0.0;
  if (x <= 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(x) - (n + 1) * std::log1p(x));
}

// sin(beta0 t)/beta0 through the smooth even function; equals t at beta0 = 0.
Real scaled_sine(Real b0sq, Real t) { return t * sinc_of_square(b0sq * t * t); }

void require_coupling(Complex g) {
  if (!(std::abs(g) > 0.0)) throw ModelError("parametric: zero pump coupling |G| = 0");
}

}  // namespace

Real sinc_of_square(Real x2) {
  if (std::abs(x2) < kSeriesCut) return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  if (x2 > 0.0) {
    const Real x = std::sqrt(x2);
    return std::sin(x) / x;
  }
  const Real x = std::sqrt(-x2);
  return std::sinh(x) / x;
}

Real cos_of_square(Real x2) {
  if (std::abs(x2) < kSeriesCut) return 1.0 - x2 / 2.0 + x2 * x2 / 24.0;
  if (x2 > 0.0) return std::cos(std::sqrt(x2));
  return std::cosh(std::sqrt(-x2));
}

Real beta0_squared(Complex g, Real delta) { return delta * delta / 4.0 - std::norm(g); }

Real p0_resonant_parametric(Real g_abs, Real t) { return pn_resonant_parametric(g_abs, 0, t); }

Real pn_resonant_parametric(Real g_abs, int n, Real t) {
  const Real sh = std::sinh(g_abs * t);
  return geometric_weight(sh * sh, n);
}

Real peak_pn_parametric(int n) {
  if (n < 1) throw ModelError("peak law needs n >= 1 (p_0 peaks at t = 0)");
  const Real nn = n;
  return std::exp(nn * std::log(nn) - (nn + 1.0) * std::log(nn + 1.0));
}

Real peak_time_resonant(Real g_abs, int n) {
  if (n < 1) throw ModelError("peak time needs n >= 1");
  return std::atanh(std::sqrt(n / (n + 1.0))) / g_abs;
}

Real mean_photon_resonant(Real g_abs, Real t) {
  const Real sh = std::sinh(g_abs * t);
  return sh * sh;
}

GammaFactors gamma_factors(Complex g, Real delta, Real t) {
  require_coupling(g);
  GammaFactors out;
  out.beta0_squared = beta0_squared(g, delta);
  const Real s = scaled_sine(out.beta0_squared, t);
  const Real c = cos_of_square(out.beta0_squared * t * t);
  const Complex d(c, 0.5 * delta * s);
  const Complex minus_i(0.0, -1.0);
  out.gamma3 = 1.0 / (d * d);
  out.gamma_plus = minus_i * g * s / d;
  out.gamma_minus = minus_i * std::conj(g) * s / d;
  return out;
}

Complex pair_amplitude(Complex g, Real delta, int n, Real t) {
  if (n < 0) return {};
  require_coupling(g);
  const Real b0sq = beta0_squared(g, delta);
  const Real s = scaled_sine(b0sq, t);
  const Real c = cos_of_square(b0sq * t * t);
  const Complex d(c, 0.5 * delta * s);
  const Complex ratio = Complex(0.0, -1.0) * g * s / d;
  return std::polar(1.0, 0.5 * delta * t) * std::pow(ratio, n) / d;
}

Real pn_detuned_parametric(Complex g, Real delta, int n, Real t) {
  return geometric_weight(mean_pairs_parametric(g, delta, t), n);
}

Real mean_pairs_parametric(Complex g, Real delta, Real t) {
  require_coupling(g);
  const Real s = scaled_sine(beta0_squared(g, delta), t);
  return std::norm(g) * s * s;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Discrete: return "Discrete";
    case Regime::Critical: return "Critical";
    case Regime::Continuum: return "Continuum";
  }
  return "?";
}

RevivalPrediction revival_period_parametric(Complex g, Real delta) {
  require_coupling(g);
  const Real b0sq = beta0_squared(g, delta);
  // Relative tolerance keeps delta = 2|G| typed in decimal on the critical line.
  if (std::abs(b0sq) <= 1e-14 * std::norm(g)) return {Regime::Critical, std::nullopt};
  if (b0sq < 0.0) return {Regime::Continuum, std::nullopt};
  return {Regime::Discrete, kPi / std::sqrt(b0sq)};
}

PeakLocation detuned_peak(Complex g, Real delta, int n) {
  if (n < 1) throw ModelError("peak location needs n >= 1");
  require_coupling(g);
  const Real g_abs = std::abs(g);
  const Real b0sq = beta0_squared(g, delta);
  const Real root_n = std::sqrt(static_cast<Real>(n));
  PeakLocation peak;
  if (b0sq > 0.0) {
    const Real b0 = std::sqrt(b0sq);
    const Real arg = root_n * b0 / g_abs;
    if (arg <= 1.0) {
      peak.time = std::asin(arg) / b0;
    } else {
      peak.time = 0.5 * kPi / b0;
      peak.interior = false;
    }
  } else if (b0sq == 0.0) {
    peak.time = root_n / g_abs;
  } else {
    const Real kappa = std::sqrt(-b0sq);
    peak.time = std::asinh(kappa * root_n / g_abs) / kappa;
  }
  peak.value = peak.interior ? peak_pn_parametric(n) : pn_detuned_parametric(g, delta, n, peak.time);
  return peak;
}

std::vector<Real> eigenvalues_parametric(Complex g, Real delta, int q, int m_max) {
  require_coupling(g);
  const Real b0sq = beta0_squared(g, delta);
  if (!(delta > 0.0 && b0sq > 0.0))
    throw ModelError("no discrete ladder in continuum/critical regime (needs delta > 2|G|)");
  const Real b0 = std::sqrt(b0sq);
  std::vector<Real> levels;
  levels.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) levels.push_back(b0 * (std::abs(q) + 2 * m + 1) - 0.5 * delta);
  return levels;
}

CoherentAmplitude coherent_amplitude(Complex epsilon, Real delta, Real t) {
  // (1 - e^{-i delta t}) / (i delta) = t e^{-i delta t/2} sinc(delta t/2)
  const Real half = 0.5 * delta * t;
  const Complex transfer = t * std::polar(1.0, -half) * sinc_of_square(half * half);
  CoherentAmplitude out;
  out.alpha = Complex(0.0, -1.0) * epsilon * transfer;

  // |eps|^2 (delta t - sin delta t)/delta^2 = |eps|^2 t^2 (x - sin x)/x^2, x = delta t
  const Real x = delta * t;
  Real shape;
  if (std::abs(x) < 1e-3) {
    const Real x2 = x * x;
    shape = x / 6.0 * (1.0 - x2 / 20.0 + x2 * x2 / 840.0);
  } else {
    shape = (x - std::sin(x)) / (x * x);
  }
  out.global_phase = std::norm(epsilon) * t * t * shape;
  return out;
}

Real pn_driven_oscillator(Complex epsilon, Real delta, int n, Real t) {
  if (n < 0) return 0.0;
  const Real mean = std::norm(coherent_amplitude(epsilon, delta, t).alpha);
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

Real peak_pn_driven(int n) {
  if (n < 0) throw ModelError("negative Fock index");
  if (n == 0) return 1.0;
  return std::exp(-n + n * std::log(static_cast<Real>(n)) - std::lgamma(n + 1.0));
}

std::vector<Real> eigenvalues_driven(Complex epsilon, Real delta, int n_max) {
  if (delta == 0.0) throw ModelError("continuum spectrum: resonant drive has no discrete ladder");
  std::vector<Real> levels;
  levels.reserve(static_cast<std::size_t>(n_max) + 1);
  const Real shift = std::norm(epsilon) / delta;
  for (int n = 0; n <= n_max; ++n) levels.push_back(n * delta - shift);
  return levels;
}

std::optional<Real> revival_period_driven(Real delta) {
  if (delta == 0.0) return std::nullopt;
  return 2.0 * kPi / std::abs(delta);
}

EffectiveIonModel map_raman_to_effective(const IonRamanParams& p) {
  if (!(p.nu > 0.0)) throw ModelError("ion: trap frequency nu must be positive");
  if (!(p.kappa > 0.0)) throw ModelError("ion: coupling constant kappa must be positive");
  EffectiveIonModel out;
  out.model.delta = p.omega1 - p.omega2 - p.nu;
  out.model.epsilon = p.kappa * p.e1 * std::conj(p.e2);
  validate(out.model);
  if (out.model.delta == 0.0) {
    out.resonant = true;
    out.warning = "resonant: no revival";
  }
  return out;
}

}  // namespace fockbloch::analytic
