#include "fockbloch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "fockbloch/analytic.hpp"

namespace fockbloch::analysis {

RefinedMaximum refine_maximum(Real t0, Real p0, Real t1, Real p1, Real t2, Real p2) {
  // Newton form of the interpolating parabola.
  const Real d01 = (p1 - p0) / (t1 - t0);
  const Real d12 = (p2 - p1) / (t2 - t1);
  const Real curv = (d12 - d01) / (t2 - t0);
  if (!(curv < 0.0)) return {t1, p1};
  Real t = 0.5 * (t0 + t1) - d01 / (2.0 * curv);
  t = std::clamp(t, t0, t2);
  const Real value = p0 + d01 * (t - t0) + curv * (t - t0) * (t - t1);
  return {t, value};
}

std::vector<Real> detect_revivals(std::span<const Real> times, std::span<const Real> survival, Real threshold,
                                  Real min_gap) {
  if (times.size() != survival.size()) throw ModelError("time and survival series differ in length");
  if (times.size() < 3) throw ModelError("survival series too short for revival detection");
  if (!(threshold > 0.5 && threshold < 1.0)) throw ModelError("revival threshold must lie in (0.5, 1)");
  if (!(min_gap > 0.0)) throw ModelError("min_gap must be positive");

  std::vector<Real> found;
  std::vector<Real> heights;
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    const Real p = survival[i];
    if (p < threshold || p < survival[i - 1] || p < survival[i + 1]) continue;
    const auto peak =
        refine_maximum(times[i - 1], survival[i - 1], times[i], p, times[i + 1], survival[i + 1]);
    if (!found.empty() && peak.time - found.back() < min_gap) {
      if (peak.value > heights.back()) {
        found.back() = peak.time;
        heights.back() = peak.value;
      }
      continue;
    }
    found.push_back(peak.time);
    heights.push_back(peak.value);
  }
  return found;
}

Peak measure_peaks(std::span<const Real> times, std::span<const Real> series) {
  if (times.size() != series.size() || times.size() < 3) throw ModelError("peak search needs >= 3 samples");
  const auto it = std::max_element(series.begin(), series.end());
  const auto i = static_cast<std::size_t>(it - series.begin());
  if (i == 0 || i + 1 == series.size()) throw ModelError("extend time window: maximum lies on the grid boundary");
  const auto peak = refine_maximum(times[i - 1], series[i - 1], times[i], series[i], times[i + 1], series[i + 1]);
  return {peak.value, peak.time};
}

Peak measure_peaks(const PropagationResult& result, int n) {
  if (result.distributions.empty() || n < result.base_index ||
      n - result.base_index >= static_cast<int>(result.distributions.front().size()))
    throw ModelError("site outside the propagated window");
  const auto series = result.series(n);
  return measure_peaks(result.times, series);
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::RevivalConfirmed: return "RevivalConfirmed";
    case Verdict::NoRevival: return "NoRevival";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

std::string decay_note(const ChainModel& model) {
  if (const auto* par = std::get_if<ParametricTwoMode>(&model)) {
    switch (analytic::revival_period_parametric(par->g, par->delta).regime) {
      case analytic::Regime::Critical: return "critical detuning: algebraic decay p0 = 1/(1 + |G|^2 t^2)";
      case analytic::Regime::Continuum: return "continuum regime: exponential decay of p0";
      case analytic::Regime::Discrete: return "discrete ladder: revivals every pi/beta0";
    }
  }
  if (const auto* drv = std::get_if<DrivenOscillator>(&model))
    return drv->delta == 0.0 ? "resonant drive: p0 = exp(-|eps|^2 t^2)" : "detuned drive: revivals every 2 pi/delta";
  const auto& chain = std::get<UniformChain>(model);
  return chain.delta == 0.0 ? "unbiased chain: ballistic spreading" : "biased chain: Bloch period 2 pi/delta";
}

}  // namespace

RevivalReport build_report(const ChainModel& model, const PropagationResult& result, Real threshold) {
  if (result.times.size() < 3) throw ModelError("propagation result too short for a revival report");
  RevivalReport report;
  report.threshold = threshold;
  report.predicted_period = revival_period(model);
  report.note = decay_note(model);

  const Real t_first = result.times.front();
  const Real t_last = result.times.back();
  const Real grid_step = (t_last - t_first) / static_cast<Real>(result.times.size() - 1);
  if (report.predicted_period && t_last - t_first < 2.0 * *report.predicted_period)
    throw ModelError("insufficient span: result must cover at least two predicted periods");

  const Real min_gap = report.predicted_period ? 0.5 * *report.predicted_period : 10.0 * grid_step;
  const auto survival = result.series(0);
  report.detected_times = detect_revivals(result.times, survival, threshold, min_gap);

  if (!report.detected_times.empty()) {
    Real prev = 0.0, gaps = 0.0;
    for (const Real t : report.detected_times) {
      gaps += t - prev;
      prev = t;
    }
    report.detected_period = gaps / static_cast<Real>(report.detected_times.size());
  }

  if (!report.predicted_period) {
    report.verdict = report.detected_times.empty() ? Verdict::NoRevival : Verdict::Inconclusive;
    return report;
  }

  const Real period = *report.predicted_period;
  const Real tol = std::max(2.0 * grid_step, 1e-3 * period);
  bool all_found = true;
  for (int k = 1; k * period <= t_last - grid_step; ++k) {
    const Real target = k * period;
    if (target < t_first + grid_step) continue;
    Real best = std::numeric_limits<Real>::infinity();
    for (const Real t : report.detected_times) best = std::min(best, std::abs(t - target));
    if (best > tol) all_found = false;
    if (std::isfinite(best)) report.max_discrepancy = std::max(report.max_discrepancy, best);
  }
  report.verdict = all_found ? Verdict::RevivalConfirmed : Verdict::Inconclusive;
  return report;
}

}  // namespace fockbloch::analysis
