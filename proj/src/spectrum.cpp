#include "fockbloch/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <variant>

#include "fockbloch/analytic.hpp"

namespace fockbloch::spectrum {

RealTridiagonal rephase(const Tridiagonal& h) {
  RealTridiagonal out;
  out.diag = h.diag;
  out.offdiag.resize(h.upper.size());
  out.phases.resize(h.size());
  // (U^dagger H U)[k][k+1] = exp(i(phase_{k+1} - phase_k)) H[k][k+1] must be real >= 0.
  Real phase = 0.0;
  if (!out.phases.empty()) out.phases[0] = 0.0;
  for (std::size_t k = 0; k < h.upper.size(); ++k) {
    out.offdiag[k] = std::abs(h.upper[k]);
    phase -= std::arg(h.upper[k]);
    out.phases[k + 1] = phase;
  }
  return out;
}

SpectrumResult diagonalize(const ChainModel& model, std::size_t cutoff) {
  if (cutoff < 2) throw ModelError("diagonalize needs cutoff >= 2");
  const auto real = rephase(build_hamiltonian(model, cutoff));
  const auto dim = static_cast<Eigen::Index>(real.diag.size());

  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(real.diag.data(), dim);
  Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(real.offdiag.data(), dim - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw ModelError("tridiagonal eigensolver did not converge");

  const bool two_edges = base_index(model, cutoff) < 0;
  SpectrumResult out;
  out.cutoff = cutoff;
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
  out.edge_weight.resize(static_cast<std::size_t>(dim));
  out.converged_mask.resize(static_cast<std::size_t>(dim));
  const auto& vecs = solver.eigenvectors();
  for (Eigen::Index j = 0; j < dim; ++j) {
    Real w = vecs(dim - 1, j) * vecs(dim - 1, j);
    if (two_edges) w = std::max(w, vecs(0, j) * vecs(0, j));
    out.edge_weight[static_cast<std::size_t>(j)] = w;
    out.converged_mask[static_cast<std::size_t>(j)] = w < kEdgeTol;
  }
  out.spacings.resize(out.eigenvalues.size() - 1);
  for (std::size_t i = 0; i + 1 < out.eigenvalues.size(); ++i)
    out.spacings[i] = out.eigenvalues[i + 1] - out.eigenvalues[i];
  return out;
}

std::string to_string(Verdict verdict) { return verdict == Verdict::Discrete ? "Discrete" : "ContinuumLike"; }

ConvergenceScan convergence_scan(const ChainModel& model, const std::vector<std::size_t>& cutoffs, std::size_t k) {
  if (cutoffs.size() < 3) throw ModelError("convergence scan needs at least 3 cutoffs");
  if (k < 1) throw ModelError("convergence scan needs k >= 1");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < k + 1) throw ModelError("every cutoff must be >= k + 1");
    if (i > 0 && cutoffs[i] <= cutoffs[i - 1]) throw ModelError("cutoffs must be increasing");
  }

  ConvergenceScan scan;
  scan.cutoffs = cutoffs;
  scan.scale = energy_scale(model);
  scan.lowest.resize(cutoffs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    const auto spec = diagonalize(model, cutoffs[i]);
    scan.lowest[i].assign(spec.eigenvalues.begin(), spec.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
  }

  const auto& a = scan.lowest[cutoffs.size() - 2];
  const auto& b = scan.lowest[cutoffs.size() - 1];
  for (std::size_t j = 0; j < k; ++j) scan.drift = std::max(scan.drift, std::abs(b[j] - a[j]));
  if (scan.drift < scan.pin_tol)
    scan.verdict = Verdict::Discrete;
  else if (scan.drift > scan.drift_tol * scan.scale)
    scan.verdict = Verdict::ContinuumLike;
  return scan;
}

Real expected_spacing(const ChainModel& model) {
  if (const auto* par = std::get_if<ParametricTwoMode>(&model)) {
    const Real b0sq = analytic::beta0_squared(par->g, par->delta);
    if (analytic::revival_period_parametric(par->g, par->delta).regime != analytic::Regime::Discrete)
      throw ModelError("no discrete ladder in continuum/critical regime (needs |delta| > 2|G|)");
    return 2.0 * std::sqrt(b0sq);
  }
  const Real delta = std::holds_alternative<DrivenOscillator>(model) ? std::get<DrivenOscillator>(model).delta
                                                                      : std::get<UniformChain>(model).delta;
  if (delta == 0.0) throw ModelError("continuum spectrum: zero detuning has no discrete ladder");
  return std::abs(delta);
}

SpacingCheck spacing_check(const SpectrumResult& spec, const ChainModel& model) {
  SpacingCheck out;
  out.expected = expected_spacing(model);

  // Longest run of consecutive converged levels.
  std::size_t best_begin = 0, best_len = 0;
  for (std::size_t i = 0; i < spec.eigenvalues.size();) {
    if (!spec.converged_mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < spec.eigenvalues.size() && spec.converged_mask[j]) ++j;
    if (j - i > best_len) {
      best_begin = i;
      best_len = j - i;
    }
    i = j;
  }
  if (best_len < 3) throw ModelError("spacing check needs at least 3 converged eigenvalues");

  Real sum = 0.0;
  for (std::size_t i = best_begin; i + 1 < best_begin + best_len; ++i) {
    const Real gap = spec.eigenvalues[i + 1] - spec.eigenvalues[i];
    sum += gap;
    out.max_dev = std::max(out.max_dev, std::abs(gap - out.expected));
  }
  out.levels_used = best_len;
  out.measured_mean = sum / static_cast<Real>(best_len - 1);
  return out;
}

}  // namespace fockbloch::spectrum
