#include <doctest.h>

#include <random>

#include "fockbloch/analysis.hpp"
#include "fockbloch/analytic.hpp"
#include "oracles.hpp"

using namespace fockbloch;
using namespace fockbloch::analysis;
using doctest::Approx;
using oracle::kPi;

namespace {

/// A result assembled from closed-form distributions on n = 0..levels.
PropagationResult synthetic(const ChainModel& model, Real t_max, std::size_t samples, int levels = 8) {
  PropagationResult r;
  r.times = uniform_times(t_max, samples);
  r.cutoff_used = static_cast<std::size_t>(levels);
  for (const Real t : r.times) {
    std::vector<Real> p(static_cast<std::size_t>(levels) + 1);
    for (int n = 0; n <= levels; ++n) {
      if (const auto* par = std::get_if<ParametricTwoMode>(&model))
        p[n] = oracle::detuned_pn(par->g, par->delta, n, t);
      else {
        const auto& d = std::get<DrivenOscillator>(model);
        p[n] = oracle::driven_pn(d.epsilon, d.delta, n, t);
      }
    }
    r.distributions.push_back(p);
    r.norm_leak.push_back(0.0);
    r.boundary_population.push_back(p.back());
  }
  return r;
}

}  // namespace

TEST_CASE("revival detection on analytic survival series") {
  const ParametricTwoMode det{{1.0, 0.0}, 2.2};
  const auto r = synthetic(det, 15.0, 1501);
  const auto s = r.series(0);
  const auto hits = detect_revivals(r.times, s, kDefaultThreshold, 3.0);
  REQUIRE(hits.size() == 2);
  const Real period = kPi / std::sqrt(0.21);
  CHECK(hits[0] == Approx(period).epsilon(1e-5));
  CHECK(hits[1] == Approx(2.0 * period).epsilon(1e-5));

  const auto res = synthetic(ParametricTwoMode{{1.0, 0.0}, 0.0}, 10.0, 1001);
  CHECK(detect_revivals(res.times, res.series(0), 0.99, 0.1).empty());

  const auto drv = synthetic(DrivenOscillator{{1.0, 0.0}, 2.0}, 7.0, 701);
  const auto dh = detect_revivals(drv.times, drv.series(0), 0.99, 1.0);
  REQUIRE(dh.size() == 2);
  CHECK(dh[0] == Approx(kPi).epsilon(1e-5));
  CHECK(dh[1] == Approx(2.0 * kPi).epsilon(1e-5));
  for (std::size_t i = 1; i < dh.size(); ++i) CHECK(dh[i] > dh[i - 1]);

  CHECK_THROWS_AS(detect_revivals(r.times, s, 0.4, 1.0), ModelError);
  CHECK_THROWS_AS(detect_revivals(r.times, s, 0.99, 0.0), ModelError);
}

TEST_CASE("quadratic refinement stays within one grid step") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<Real> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Real h = 0.1, t1 = 1.0;
    const Real p0 = 0.5 + 0.3 * u(rng), p2 = 0.5 + 0.3 * u(rng);
    const Real p1 = std::max(p0, p2) + 0.01 * (1.0 + u(rng));
    const auto m = refine_maximum(t1 - h, p0, t1, p1, t1 + h, p2);
    CHECK(std::abs(m.time - t1) <= h);
    CHECK(m.value >= p1 - 1e-15);
  }
  // exact for f = -1.25 t^2 + 3 t - 1, vertex (1.2, 0.8)
  const auto m = refine_maximum(0.0, -1.0, 1.0, 0.75, 2.0, 0.0);
  CHECK(m.time == Approx(1.2));
  CHECK(m.value == Approx(0.8));
}

TEST_CASE("peak measurement") {
  const auto r = synthetic(ParametricTwoMode{{1.0, 0.0}, 0.0}, 2.0, 401);
  const auto p1 = measure_peaks(r, 1);
  CHECK(std::abs(p1.peak_value - 0.25) < 1e-6);
  CHECK(p1.peak_time == Approx(std::atanh(std::sqrt(0.5))).epsilon(1e-3));

  const auto d = synthetic(ParametricTwoMode{{1.0, 0.0}, 2.2}, 2.0, 401);
  const auto pd = measure_peaks(d, 1);
  CHECK(std::abs(pd.peak_value - 0.25) < 1e-6);
  CHECK(pd.peak_time * std::sqrt(0.21) == Approx(std::asin(std::sqrt(0.21))).epsilon(1e-3));

  const auto drv = synthetic(DrivenOscillator{{1.0, 0.0}, 1.0}, 3.0, 601);
  CHECK(std::abs(measure_peaks(drv, 1).peak_value - std::exp(-1.0)) < 1e-6);

  // maximum on the boundary of the window
  const auto shortr = synthetic(ParametricTwoMode{{1.0, 0.0}, 0.0}, 0.5, 51);
  CHECK_THROWS_WITH_AS(measure_peaks(shortr, 1), doctest::Contains("extend time window"), ModelError);
  CHECK_THROWS_AS(measure_peaks(r, 99), ModelError);
}

TEST_CASE("revival reports") {
  const ParametricTwoMode a{{1.0, 0.0}, 2.02};
  const auto rep = build_report(a, synthetic(a, 50.0, 5001));
  CHECK(rep.verdict == Verdict::RevivalConfirmed);
  REQUIRE(rep.predicted_period.has_value());
  CHECK(*rep.predicted_period == Approx(kPi / std::sqrt(0.0201)));
  REQUIRE(rep.detected_period.has_value());
  CHECK(std::abs(*rep.detected_period / *rep.predicted_period - 1.0) < 1e-3);
  CHECK(rep.max_discrepancy >= 0.0);
  CHECK(rep.detected_times.size() == 2);

  const ParametricTwoMode res{{1.0, 0.0}, 0.0};
  const auto none = build_report(res, synthetic(res, 10.0, 1001));
  CHECK(none.verdict == Verdict::NoRevival);
  CHECK(none.detected_times.empty());

  const ParametricTwoMode crit{{1.0, 0.0}, 2.0};
  const auto c = build_report(crit, synthetic(crit, 50.0, 2001));
  CHECK(c.verdict == Verdict::NoRevival);
  CHECK(c.note.find("1/(1 + |G|^2 t^2)") != std::string::npos);

  const DrivenOscillator drv{{1.0, 0.0}, 2.0};
  CHECK(build_report(drv, synthetic(drv, 7.0, 701)).verdict == Verdict::RevivalConfirmed);
  CHECK_THROWS_AS(build_report(drv, synthetic(drv, 5.0, 501)), ModelError);
}
