#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockbloch/core.hpp"
#include "fockbloch/kernels.hpp"

namespace fockbloch {

/// Raised when no cutoff up to the ceiling resolves the dynamics.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, std::size_t cutoff_tried, Real boundary_population)
      : std::runtime_error(what), cutoff_tried_(cutoff_tried), boundary_population_(boundary_population) {}

  std::size_t cutoff_tried() const { return cutoff_tried_; }
  /// Largest |C_N|^2 seen at the truncation edge in the last attempt.
  Real boundary_population() const { return boundary_population_; }

 private:
  std::size_t cutoff_tried_;
  Real boundary_population_;
};

/// Raised when the integrator cannot meet its tolerances or loses norm.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
  Real rel_tol = 1e-10;
  Real abs_tol = 1e-12;
  Real leak_tol = 1e-10;
  std::size_t max_cutoff = 4096;
  std::vector<Real> sample_times;
  kernels::Backend backend = kernels::Backend::OpenMP;
  std::size_t max_steps = 50'000'000;

  /// Throws ModelError on out-of-range tolerances or a bad time grid.
  void validate() const;
};

/// `count` equally spaced times on [0, t_max], both ends included.
std::vector<Real> uniform_times(Real t_max, std::size_t count);

/// Ceiling from FOCKBLOCH_MAX_CUTOFF if set, else `fallback`.
std::size_t max_cutoff_from_env(std::size_t fallback = 4096);

struct PropagationResult {
  std::vector<Real> times;
  /// distributions[i][k] = |C(base_index + k)|^2 at times[i].
  std::vector<std::vector<Real>> distributions;
  /// 1 - sum_k p_k at each time.
  std::vector<Real> norm_leak;
  /// Population on the truncation edge(s) at each time.
  std::vector<Real> boundary_population;
  std::size_t cutoff_used = 0;
  int base_index = 0;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;

  /// p at a site index; zero outside the window.
  Real probability(std::size_t time_index, int site) const;
  /// Time series of one site's occupation.
  std::vector<Real> series(int site) const;
};

/// Integrates i dC/dt = H C with a Dormand-Prince 5(4) pair and samples
/// |C|^2 at cfg.sample_times through the pair's continuous extension.
PropagationResult propagate(const ChainModel& model, const StateVector& initial, const IntegratorConfig& cfg);

/// Same, also storing the complex amplitudes at each sample time.
PropagationResult propagate(const ChainModel& model, const StateVector& initial, const IntegratorConfig& cfg,
                            std::vector<std::vector<Complex>>* sampled_amplitudes);

struct CutoffOptions {
  std::size_t max_cutoff = 4096;
  /// Sites |n| <= watch_max must agree between nested truncations.
  int watch_max = 10;
  std::size_t probe_samples = 33;
  /// Probe runs use rel_tol = clamp(rel_tol_scale * leak_tol, min_rel_tol, 1e-8).
  Real rel_tol_scale = 1e-2;
  Real min_rel_tol = 1e-12;
  kernels::Backend backend = kernels::Backend::OpenMP;
};

/// Exact revival period of the vacuum (Bloch period for a biased chain), if any.
std::optional<Real> revival_period(const ChainModel& model);

/// Analytic first guess for the cutoff (before any doubling).
std::size_t seed_cutoff(const ChainModel& model, Real t_max, Real leak_tol);

/// First cutoff N in the doubling sequence from seed_cutoff whose watched-site
/// occupations at probe times agree within leak_tol with those of a 25% wider
/// truncation. Throws TruncationError when N would exceed opts.max_cutoff.
std::size_t adaptive_cutoff(const ChainModel& model, Real t_max, Real leak_tol, const CutoffOptions& opts = {});

/// adaptive_cutoff followed by propagation from the vacuum.
PropagationResult propagate_from_vacuum(const ChainModel& model, const IntegratorConfig& cfg, int watch_max = 10);

struct Observables {
  Real survival = 0.0;
  Real mean_n = 0.0;
  Real entropy = 0.0;
};

/// Survival p_0, mean index sum n p_n, and Shannon entropy per sample time.
std::vector<Observables> observables(const PropagationResult& result);

}  // namespace fockbloch
