#pragma once

// Closed-form dynamics and spectra for vacuum-start evolution.

#include <optional>
#include <string>
#include <vector>

#include "fockbloch/core.hpp"

namespace fockbloch::analytic {

// ---------------------------------------------------------------------------
// Regime-smooth helpers. All detuned parametric formulas go through
// beta0^2 = delta^2/4 - |G|^2, which may have either sign. The two even
// functions below are analytic in x2 = x^2 and switch to sinh/cosh for x2 < 0
// and to a Taylor series near zero.

/// sin(sqrt(x2)) / sqrt(x2), continued to sinh for x2 < 0.
Real sinc_of_square(Real x2);
/// cos(sqrt(x2)), continued to cosh for x2 < 0.
Real cos_of_square(Real x2);

/// Delta^2/4 - |G|^2.
Real beta0_squared(Complex g, Real delta);

// ---------------------------------------------------------------------------
// Resonant parametric amplifier (delta = 0).

/// sech^2(|G| t).
Real p0_resonant_parametric(Real g_abs, Real t);
/// sech^2(|G| t) tanh^{2n}(|G| t).
Real pn_resonant_parametric(Real g_abs, int n, Real t);
/// n^n / (n+1)^{n+1}; throws for n < 1.
Real peak_pn_parametric(int n);
/// |G| t_peak = artanh sqrt(n/(n+1)), returned as a time.
Real peak_time_resonant(Real g_abs, int n);
/// sinh^2(|G| t), the mean occupation of either mode.
Real mean_photon_resonant(Real g_abs, Real t);

// ---------------------------------------------------------------------------
// Detuned parametric amplifier.

/// Factors of the normal-ordered propagator
///   exp(-iHt)|0,0> ~ exp(gamma_plus K+) exp(ln(gamma3) K0) exp(gamma_minus K-)|0,0>
/// for H = delta K0 + G K+ + G* K-. gamma_plus already carries the factor
/// -i t G, so |gamma_plus|^2 is the ratio p_{n+1}/p_n and vanishes at t = 0.
struct GammaFactors {
  Complex gamma3;
  Complex gamma_plus;
  Complex gamma_minus;
  Real beta0_squared = 0.0;
};

GammaFactors gamma_factors(Complex g, Real delta, Real t);

/// Pair-ladder amplitude C_n(t) = <n,n| exp(-iHt) |0,0>, including the
/// global phase of the model's H = delta n + G a+b+ + G* ab.
Complex pair_amplitude(Complex g, Real delta, int n, Real t);

/// |gamma3| |gamma_plus|^{2n}; valid for every sign of beta0^2.
Real pn_detuned_parametric(Complex g, Real delta, int n, Real t);

/// Mean pair number sum_n n p_n = |G|^2 sin^2(beta0 t)/beta0^2.
Real mean_pairs_parametric(Complex g, Real delta, Real t);

enum class Regime { Discrete, Critical, Continuum };

std::string to_string(Regime regime);

struct RevivalPrediction {
  Regime regime = Regime::Continuum;
  std::optional<Real> period;
};

/// Discrete with period pi/beta0 when |delta| > 2|G|.
RevivalPrediction revival_period_parametric(Complex g, Real delta);

struct PeakLocation {
  Real time = 0.0;
  Real value = 0.0;
  /// False when sqrt(n) beta0 > |G|: p_n then saturates at beta0 t = pi/2
  /// below n^n/(n+1)^{n+1}.
  bool interior = true;
};

/// First maximum of p_n for a detuned (|delta| > 2|G|) amplifier.
PeakLocation detuned_peak(Complex g, Real delta, int n);

/// beta0 (|q| + 2m + 1) - delta/2 for m = 0..m_max. Requires delta > 2|G|.
std::vector<Real> eigenvalues_parametric(Complex g, Real delta, int q, int m_max);

// ---------------------------------------------------------------------------
// Driven oscillator H = delta a+a + eps a+ + eps* a.

struct CoherentAmplitude {
  Complex alpha;
  Real global_phase = 0.0;
};

CoherentAmplitude coherent_amplitude(Complex epsilon, Real delta, Real t);

/// Poisson weight with mean |alpha(t)|^2.
Real pn_driven_oscillator(Complex epsilon, Real delta, int n, Real t);

/// exp(-n) n^n / n!, the largest value the Poisson weight p_n can take.
Real peak_pn_driven(int n);

/// n delta - |eps|^2/delta for n = 0..n_max. Throws for delta = 0.
std::vector<Real> eigenvalues_driven(Complex epsilon, Real delta, int n_max);

/// 2 pi / |delta|, or nothing on resonance.
std::optional<Real> revival_period_driven(Real delta);

// ---------------------------------------------------------------------------
// Trapped ion.

struct EffectiveIonModel {
  DrivenOscillator model;
  bool resonant = false;  // delta_eff == 0: no revival
  std::string warning;
};

/// delta_eff = omega1 - omega2 - nu, eps_eff = kappa E1 E2*.
EffectiveIonModel map_raman_to_effective(const IonRamanParams& p);

}  // namespace fockbloch::analytic
