#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockbloch/core.hpp"
#include "fockbloch/propagate.hpp"

namespace fockbloch::analysis {

inline constexpr Real kDefaultThreshold = 0.99;

/// Vertex of the parabola through three samples, clamped to [t0, t2].
struct RefinedMaximum {
  Real time = 0.0;
  Real value = 0.0;
};
RefinedMaximum refine_maximum(Real t0, Real p0, Real t1, Real p1, Real t2, Real p2);

/// Interior local maxima of a survival series at or above `threshold`,
/// refined quadratically; detections closer than `min_gap` keep the higher one.
std::vector<Real> detect_revivals(std::span<const Real> times, std::span<const Real> survival, Real threshold,
                                  Real min_gap);

struct Peak {
  Real peak_value = 0.0;
  Real peak_time = 0.0;
};

/// Largest interior maximum of p_n(t). Throws if the maximum sits on the
/// first or last sample.
Peak measure_peaks(const PropagationResult& result, int n);
Peak measure_peaks(std::span<const Real> times, std::span<const Real> series);

enum class Verdict { RevivalConfirmed, NoRevival, Inconclusive };

std::string to_string(Verdict verdict);

struct RevivalReport {
  std::optional<Real> predicted_period;
  std::vector<Real> detected_times;
  Real threshold = kDefaultThreshold;
  /// Largest |detection - k * period| over predicted revivals in range.
  Real max_discrepancy = 0.0;
  /// Mean gap between consecutive detections, with t = 0 counted as the first.
  std::optional<Real> detected_period;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

RevivalReport build_report(const ChainModel& model, const PropagationResult& result,
                           Real threshold = kDefaultThreshold);

}  // namespace fockbloch::analysis
