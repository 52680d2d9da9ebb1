// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "fockbloch/analytic.hpp"
#include "fockbloch/scenario.hpp"
#include "fockbloch/spectrum.hpp"
#include "oracles.hpp"

using namespace fockbloch;
using oracle::kPi;

namespace {

/// Largest |1 - sum p_n| seen by any propagation in this run.
Real g_worst_leak = 0.0;
int g_runs = 0;

void track(const PropagationResult& r) {
  for (const Real leak : r.norm_leak) g_worst_leak = std::max(g_worst_leak, std::abs(leak));
  ++g_runs;
}

cli::ScenarioRun run_preset(const std::string& id) {
  auto run = cli::simulate(cli::scenario_from_raw(cli::preset(id)));
  track(run.result);
  return run;
}

PropagationResult propagate_at(const ChainModel& model, std::size_t cutoff, std::vector<Real> times) {
  IntegratorConfig cfg;
  cfg.sample_times = std::move(times);
  auto r = propagate(model, initial_vacuum(model, cutoff), cfg);
  track(r);
  return r;
}

Real peak_law_parametric(int n) { return std::pow(n, n) / std::pow(n + 1.0, n + 1); }

/// Survival at a detected revival, refined on the three samples around it.
Real refined_survival(const PropagationResult& r, Real t) {
  const auto s = r.series(0);
  std::size_t i = static_cast<std::size_t>(std::lower_bound(r.times.begin(), r.times.end(), t) - r.times.begin());
  i = std::clamp<std::size_t>(i, 1, r.times.size() - 2);
  if (s[i - 1] > s[i] && i > 1) --i;
  if (s[i + 1] > s[i] && i + 2 < r.times.size()) ++i;
  return analysis::refine_maximum(r.times[i - 1], s[i - 1], r.times[i], s[i], r.times[i + 1], s[i + 1]).value;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [X]");
  }
};

std::string num(const char* fmt, Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

Outcome figure1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto run = run_preset("1");
  const Real seconds = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
  Real err = 0.0;
  for (std::size_t i = 0; i < run.result.times.size(); ++i)
    for (int n = 0; n <= 3; ++n)
      err = std::max(err, std::abs(run.result.probability(i, n) - oracle::resonant_pn(1.0, n, run.result.times[i])));
  Real peak_dev = 0.0;
  for (int n = 1; n <= 3; ++n)
    peak_dev = std::max(peak_dev, std::abs(analysis::measure_peaks(run.result, n).peak_value - peak_law_parametric(n)));
  o.require(err < 1e-8, "max|p_n - closed form| = " + num("%.2e", err) + " < 1e-8");
  o.require(peak_dev < 1e-5, "peak dev = " + num("%.2e", peak_dev) + " < 1e-5");
  o.require(seconds < 5.0, "runtime = " + num("%.2f", seconds) + " s < 5 s");
  return o;
}

Outcome figure2() {
  Outcome o;
  for (const std::string id : {"2a", "2b"}) {
    const auto run = run_preset(id);
    const auto& m = std::get<ParametricTwoMode>(run.config.model);
    const Real period = kPi / std::sqrt(m.delta * m.delta / 4.0 - std::norm(m.g));
    const auto rep = analysis::build_report(m, run.result);
    const Real rel = rep.detected_period ? std::abs(*rep.detected_period / period - 1.0) : 1.0;
    Real p0_num = 1.0;
    for (const Real t : rep.detected_times) p0_num = std::min(p0_num, refined_survival(run.result, t));
    if (rep.detected_times.empty()) p0_num = 0.0;
    Real p0_analytic = 0.0;
    for (int k = 1; k <= 2; ++k)
      p0_analytic = std::max(p0_analytic, std::abs(1.0 - analytic::pn_detuned_parametric(m.g, m.delta, 0, k * period)));
    Real peak_dev = 0.0;
    for (int n = 1; n <= 3; ++n)
      peak_dev = std::max(peak_dev, std::abs(analysis::measure_peaks(run.result, n).peak_value - peak_law_parametric(n)));
    o.require(rel < 1e-3, id + ": period " + num("%.6f", rep.detected_period.value_or(0.0)) + " vs " +
                              num("%.6f", period) + " rel " + num("%.1e", rel) + " < 1e-3");
    o.require(rep.detected_times.size() >= 2 && p0_num > 1.0 - 1e-4, "p0 at revivals >= " + num("%.8f", p0_num));
    o.require(p0_analytic < 1e-10, "|1 - p0_analytic| = " + num("%.1e", p0_analytic));
    o.require(peak_dev < 1e-5, "peak dev " + num("%.1e", peak_dev));
  }
  return o;
}

Outcome figure3() {
  Outcome o;
  Real err = 0.0, peak_dev = 0.0, revival_gap = 0.0;
  int peaks = 0;
  for (const std::string id : {"3a", "3b", "3c", "3d"}) {
    const auto run = run_preset(id);
    const auto& m = std::get<DrivenOscillator>(run.config.model);
    for (std::size_t i = 0; i < run.result.times.size(); ++i)
      for (int n = 0; n <= 2; ++n)
        err = std::max(err, std::abs(run.result.probability(i, n) - oracle::driven_pn(m.epsilon, m.delta, n, run.result.times[i])));
    const Real max_mean = m.delta == 0.0 ? 1e300 : std::pow(2.0 * std::abs(m.epsilon) / m.delta, 2);
    for (int n = 1; n <= 2; ++n) {
      if (max_mean < n) continue;  // peak law not reachable
      const Real expected = std::exp(-n) * std::pow(n, n) / std::tgamma(n + 1.0);
      peak_dev = std::max(peak_dev, std::abs(analysis::measure_peaks(run.result, n).peak_value - expected));
      ++peaks;
    }
    if (m.delta != 0.0) {
      const Real period = 2.0 * kPi / m.delta;
      const auto at = propagate_at(m, run.result.cutoff_used, {period, 2.0 * period});
      revival_gap = std::max({revival_gap, 1.0 - at.probability(0, 0), 1.0 - at.probability(1, 0)});
    }
  }
  // doubling the drive leaves the revival period unchanged
  const DrivenOscillator weak{{1.0, 0.0}, 1.0}, strong{{2.0, 0.0}, 1.0};
  IntegratorConfig cfg;
  cfg.sample_times = uniform_times(2.2 * 2.0 * kPi, 1601);
  const auto rw = propagate_from_vacuum(weak, cfg, 2);
  const auto rs = propagate_from_vacuum(strong, cfg, 2);
  track(rw);
  track(rs);
  const auto pw = analysis::build_report(weak, rw).detected_period;
  const auto ps = analysis::build_report(strong, rs).detected_period;
  const Real invariance = (pw && ps) ? std::abs(*ps / *pw - 1.0) : 1.0;
  const auto strong_at = propagate_at(strong, rs.cutoff_used, {2.0 * kPi});
  revival_gap = std::max(revival_gap, 1.0 - strong_at.probability(0, 0));

  o.require(err < 1e-8, "max|p_n - Poisson| = " + num("%.2e", err) + " < 1e-8");
  o.require(peaks == 5 && peak_dev < 1e-5, std::to_string(peaks) + " reachable peaks, dev " + num("%.1e", peak_dev) + " < 1e-5");
  o.require(revival_gap < 1e-8, "1 - p0(2 pi k/delta) = " + num("%.1e", revival_gap) + " < 1e-8");
  o.require(invariance < 1e-3, "period eps vs 2 eps rel " + num("%.1e", invariance));
  return o;
}

Outcome ladder() {
  Outcome o;
  const ParametricTwoMode m{{1.0, 0.0}, 2.2};
  const auto spec = spectrum::diagonalize(m, 400);
  const Real b0 = std::sqrt(0.21);
  Real dev = 0.0;
  for (int k = 0; k < 10; ++k) dev = std::max(dev, std::abs(spec.eigenvalues[k] - (b0 * (2 * k + 1) - 1.1)));
  const auto sc = spectrum::spacing_check(spec, m);
  const Real spacing_dev = std::abs(sc.measured_mean - 2.0 * b0);
  const DrivenOscillator d{{1.0, 0.0}, 2.0};
  const auto ds = spectrum::diagonalize(d, 400);
  Real ddev = 0.0;
  for (int k = 0; k < 10; ++k) ddev = std::max(ddev, std::abs(ds.eigenvalues[k] - (2.0 * k - 0.5)));
  o.require(dev < 1e-8, "10 lowest parametric levels dev " + num("%.1e", dev) + " < 1e-8");
  o.require(spacing_dev < 1e-8, "mean spacing " + num("%.9f", sc.measured_mean) + " vs 2 beta0, dev " + num("%.1e", spacing_dev));
  o.require(ddev < 1e-8, "driven levels dev " + num("%.1e", ddev) + " < 1e-8");
  return o;
}

Outcome continuum() {
  Outcome o;
  const std::vector<std::size_t> cutoffs{100, 200, 400};
  for (const auto& [label, model] : std::vector<std::pair<std::string, ChainModel>>{
           {"parametric delta=0", ParametricTwoMode{{1.0, 0.0}, 0.0}}, {"driven delta=0", DrivenOscillator{{1.0, 0.0}, 0.0}}}) {
    const auto scan = spectrum::convergence_scan(model, cutoffs, 5);
    o.require(scan.verdict == spectrum::Verdict::ContinuumLike && scan.drift > 1e-2 * scan.scale,
              label + ": ContinuumLike, drift " + num("%.3g", scan.drift));
  }
  const auto disc = spectrum::convergence_scan(ParametricTwoMode{{1.0, 0.0}, 2.2}, cutoffs, 5);
  o.require(disc.verdict == spectrum::Verdict::Discrete && disc.drift < 1e-6,
            "delta=2.2: Discrete, drift " + num("%.1e", disc.drift) + " < 1e-6");
  return o;
}

Outcome continuation() {
  Outcome o;
  Real dev = 0.0, crit = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const Real t = 0.01 * i;
    for (int n = 0; n <= 5; ++n)
      dev = std::max(dev, std::abs(analytic::pn_detuned_parametric({1.0, 0.0}, 1e-6, n, t) - analytic::pn_resonant_parametric(1.0, n, t)));
  }
  for (int i = 0; i <= 1000; ++i) {
    const Real t = 0.05 * i;
    crit = std::max(crit, std::abs(analytic::pn_detuned_parametric({1.0, 0.0}, 2.0, 0, t) - 1.0 / (1.0 + t * t)));
  }
  o.require(dev < 1e-8, "delta=1e-6 vs resonant dev " + num("%.1e", dev) + " < 1e-8");
  o.require(crit < 1e-10, "critical p0 vs 1/(1+t^2) dev " + num("%.1e", crit) + " < 1e-10");
  return o;
}

Outcome ion() {
  Outcome o;
  const IonRamanParams p{100.0, 98.9, 1.0, {1.0, 0.0}, {1.0, 0.0}, 1.0};
  const auto eff = analytic::map_raman_to_effective(p);
  o.require(eff.model.delta == p.omega1 - p.omega2 - p.nu, "delta_eff = " + num("%.17g", eff.model.delta) + " exact");
  auto raw = cli::parse_config_text("model = ion\nomega1 = 100\nomega2 = 98.9\nnu = 1\nsamples = 2001\n", "ion");
  const auto run = cli::simulate(cli::scenario_from_raw(raw));
  track(run.result);
  const auto rep = analysis::build_report(run.config.model, run.result);
  const Real period = 2.0 * kPi / eff.model.delta;
  Real worst = rep.detected_times.empty() ? 1.0 : 0.0;
  for (std::size_t k = 0; k < rep.detected_times.size(); ++k)
    worst = std::max(worst, std::abs(rep.detected_times[k] / ((k + 1) * period) - 1.0));
  o.require(rep.detected_times.size() >= 2 && worst < 1e-3,
            std::to_string(rep.detected_times.size()) + " revivals, worst rel " + num("%.1e", worst) + " < 1e-3");
  return o;
}

Outcome bloch() {
  Outcome o;
  const UniformChain chain{1.0, 0.5, true};
  const Real period = 2.0 * kPi / chain.delta;
  IntegratorConfig cfg;
  cfg.sample_times = uniform_times(period, 65);
  const auto r = propagate_from_vacuum(chain, cfg, 5);
  track(r);
  const Real revived = r.probability(r.times.size() - 1, 0);

  const int half = 40;
  const auto h = oracle::chain_hamiltonian(chain.beta, chain.delta, -half, half);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(2 * half + 1);
  psi0(half) = 1.0;
  Real dev = 0.0;
  for (std::size_t i = 0; i < r.times.size(); i += 4) {
    const auto psi = oracle::evolve(h, psi0, r.times[i]);
    for (int site = -5; site <= 5; ++site) dev = std::max(dev, std::abs(r.probability(i, site) - std::norm(psi(half + site))));
  }
  o.require(revived > 1.0 - 1e-6, "p_0(2 pi/delta) = " + num("%.10f", revived) + " > 1 - 1e-6");
  o.require(dev < 1e-6, "matrix-exponential dev " + num("%.1e", dev) + " < 1e-6");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 figure 1 reproduction", figure1},
      {"2 figure 2 reproduction", figure2},
      {"3 figure 3 reproduction", figure3},
      {"4 spectral ladder", ladder},
      {"5 continuum diagnostic", continuum},
      {"6 analytic continuation", continuation},
      {"8 ion mapping", ion},
      {"9 uniform-chain Bloch revival", bloch},
  };
  int failures = 0;
  std::vector<std::pair<std::string, Outcome>> results;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  // unitarity over every propagation above
  const bool unitary = g_runs > 0 && g_worst_leak <= 1e-9;
  std::printf("[%s] 7 unitarity: max |1 - sum p_n| = %.2e over %d propagations <= 1e-9\n", unitary ? "PASS" : "FAIL",
              g_worst_leak, g_runs);
  failures += unitary ? 0 : 1;
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
