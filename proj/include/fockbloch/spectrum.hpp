#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fockbloch/core.hpp"

namespace fockbloch::spectrum {

/// Real symmetric form of a Hermitian tridiagonal matrix under the diagonal
/// gauge U = diag(exp(i phase_k)): U^dagger H U has off-diagonals |H[k][k+1]|.
struct RealTridiagonal {
  std::vector<Real> diag;
  std::vector<Real> offdiag;
  std::vector<Real> phases;
};

RealTridiagonal rephase(const Tridiagonal& h);

struct SpectrumResult {
  std::size_t cutoff = 0;
  std::vector<Real> eigenvalues;  // ascending
  /// Eigenvector weight on the truncation edge is below edge_tol.
  std::vector<bool> converged_mask;
  std::vector<Real> edge_weight;
  std::vector<Real> spacings;
};

/// Eigenvector edge weight below which a level counts as converged.
inline constexpr Real kEdgeTol = 1e-14;

SpectrumResult diagonalize(const ChainModel& model, std::size_t cutoff);

enum class Verdict { Discrete, ContinuumLike };

std::string to_string(Verdict verdict);

struct ConvergenceScan {
  std::vector<std::size_t> cutoffs;
  /// lowest[i] holds the k lowest eigenvalues at cutoffs[i].
  std::vector<std::vector<Real>> lowest;
  /// Largest shift of the k lowest levels between the two largest cutoffs.
  Real drift = 0.0;
  Real scale = 0.0;
  Real pin_tol = 1e-6;
  Real drift_tol = 1e-2;
  /// Empty when the drift lies between pin_tol and drift_tol * scale.
  std::optional<Verdict> verdict;
};

ConvergenceScan convergence_scan(const ChainModel& model, const std::vector<std::size_t>& cutoffs, std::size_t k);

struct SpacingCheck {
  Real expected = 0.0;
  Real measured_mean = 0.0;
  Real max_dev = 0.0;
  std::size_t levels_used = 0;
};

/// Compares converged level spacings with 2 beta0 (parametric) or |delta|
/// (driven oscillator, biased chain).
SpacingCheck spacing_check(const SpectrumResult& spec, const ChainModel& model);

/// Level spacing predicted for a model in its discrete regime.
Real expected_spacing(const ChainModel& model);

}  // namespace fockbloch::spectrum
