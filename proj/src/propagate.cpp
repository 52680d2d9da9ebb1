#include "fockbloch/propagate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <variant>

#include "fockbloch/analytic.hpp"

namespace fockbloch {

namespace {

// Dormand-Prince 5(4) tableau with Hairer's continuous extension.
constexpr Real c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr std::array<Real, 1> a2{1.0 / 5.0};
constexpr std::array<Real, 2> a3{3.0 / 40.0, 9.0 / 40.0};
constexpr std::array<Real, 3> a4{44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0};
constexpr std::array<Real, 4> a5{19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0};
constexpr std::array<Real, 5> a6{9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0};
constexpr std::array<Real, 6> a7{35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0};
constexpr std::array<Real, 7> e7{71.0 / 57600.0,   0.0,        -71.0 / 16695.0, 71.0 / 1920.0,
                                 -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};
constexpr std::array<Real, 7> d7{-12715105075.0 / 11282082432.0,
                                 0.0,
                                 87487479700.0 / 32700410799.0,
                                 -10690763975.0 / 1880347072.0,
                                 701980252875.0 / 199316789632.0,
                                 -1453857185.0 / 822651844.0,
                                 69997945.0 / 29380423.0};

// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<Real, Real> gershgorin_interval(const Tridiagonal& h) {
  Real lo = h.diag[0];
  Real hi = h.diag[0];
  for (std::size_t k = 0; k < h.size(); ++k) {
    Real r = 0.0;
    if (k + 1 < h.size()) r += std::abs(h.upper[k]);
    if (k > 0) r += std::abs(h.upper[k - 1]);
    lo = std::min(lo, h.diag[k] - r);
    hi = std::max(hi, h.diag[k] + r);
  }
  return {lo, hi};
}

class DormandPrince {
 public:
  DormandPrince(const Tridiagonal& h, kernels::Backend backend)
      : h_(h), backend_(backend), dim_(h.size()) {
    for (auto& k : k_) k.resize(dim_);
    y_new_.resize(dim_);
    scratch_.resize(dim_);
  }

  // Advances y by `step`; returns the scaled error. k_[0] must hold f(y).
  Real attempt(const std::vector<Complex>& y, Real step, Real atol, Real rtol) {
    stage(y, step, a2, 1);
    stage(y, step, a3, 2);
    stage(y, step, a4, 3);
    stage(y, step, a5, 4);
    stage(y, step, a6, 5);
    kernels::stage_combination(backend_, y, step, a7, pointers(6), y_new_);
    kernels::schrodinger_rhs(backend_, h_, y_new_, k_[6]);
    return kernels::scaled_error(backend_, y, y_new_, step, e7, pointers(7), atol, rtol);
  }

  // After an accepted attempt: y <- y_new. The previous state and the step's
  // stages stay in the buffers until the next attempt, for interpolate().
  void accept(std::vector<Complex>& y) {
    std::swap(y, y_new_);
    std::swap(k_[0], k_[6]);
  }

  // Continuous extension at fraction theta of the step just accepted into y.
  void interpolate(const std::vector<Complex>& y, Real step, Real theta, std::vector<Complex>& out) const {
    const Real theta1 = 1.0 - theta;
    const auto& y_old = y_new_;
    const auto& k1 = k_[6];
    const auto& k7 = k_[0];
    for (std::size_t i = 0; i < dim_; ++i) {
      const Complex diff = y[i] - y_old[i];
      const Complex bspl = step * k1[i] - diff;
      const Complex r4 = diff - step * k7[i] - bspl;
      const Complex r5 = step * (d7[0] * k1[i] + d7[2] * k_[2][i] + d7[3] * k_[3][i] + d7[4] * k_[4][i] +
                                 d7[5] * k_[5][i] + d7[6] * k7[i]);
      out[i] = y_old[i] + theta * (diff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
    }
  }

  std::vector<Complex>& first_stage() { return k_[0]; }

 private:
  template <std::size_t M>
  void stage(const std::vector<Complex>& y, Real step, const std::array<Real, M>& coeffs, std::size_t index) {
    kernels::stage_combination(backend_, y, step, coeffs, pointers(M), scratch_);
    kernels::schrodinger_rhs(backend_, h_, scratch_, k_[index]);
  }

  std::span<const Complex* const> pointers(std::size_t count) {
    for (std::size_t j = 0; j < 7; ++j) ptrs_[j] = k_[j].data();
    return {ptrs_.data(), count};
  }

  const Tridiagonal& h_;
  kernels::Backend backend_;
  std::size_t dim_;
  std::array<std::vector<Complex>, 7> k_;
  std::array<const Complex*, 7> ptrs_{};
  std::vector<Complex> y_new_;
  std::vector<Complex> scratch_;
};

void record(PropagationResult& out, const std::vector<Complex>& y, Real t,
            std::vector<std::vector<Complex>>* sampled) {
  std::vector<Real> p(y.size());
  Real sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    p[i] = std::norm(y[i]);
    sum += p[i];
  }
  Real edge = p.back();
  if (out.base_index < 0) edge += p.front();
  out.times.push_back(t);
  out.norm_leak.push_back(1.0 - sum);
  out.boundary_population.push_back(edge);
  out.distributions.push_back(std::move(p));
  if (sampled) sampled->push_back(y);
}

}  // namespace

void IntegratorConfig::validate() const {
  auto in_range = [](Real tol) { return tol > 0.0 && tol < 1e-3; };
  if (!in_range(rel_tol) || !in_range(abs_tol) || !in_range(leak_tol))
    throw ModelError("integrator tolerances must lie in (0, 1e-3)");
  if (sample_times.empty()) throw ModelError("no sample times requested");
  if (!(sample_times.front() >= 0.0)) throw ModelError("sample times must start at t >= 0");
  for (std::size_t i = 1; i < sample_times.size(); ++i)
    if (!(sample_times[i] > sample_times[i - 1])) throw ModelError("sample times must be strictly increasing");
  if (max_cutoff < 1) throw ModelError("max_cutoff must be >= 1");
}

std::vector<Real> uniform_times(Real t_max, std::size_t count) {
  if (count < 2) throw ModelError("need at least 2 samples");
  if (!(t_max > 0.0)) throw ModelError("t_max must be positive");
  std::vector<Real> times(count);
  for (std::size_t i = 0; i < count; ++i) times[i] = t_max * static_cast<Real>(i) / static_cast<Real>(count - 1);
  times.back() = t_max;
  return times;
}

std::size_t max_cutoff_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("FOCKBLOCH_MAX_CUTOFF"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw ModelError(std::string("FOCKBLOCH_MAX_CUTOFF is not a positive integer: ") + env);
  }
  return fallback;
}

Real PropagationResult::probability(std::size_t time_index, int site) const {
  const int k = site - base_index;
  const auto& p = distributions.at(time_index);
  if (k < 0 || k >= static_cast<int>(p.size())) return 0.0;
  return p[static_cast<std::size_t>(k)];
}

std::vector<Real> PropagationResult::series(int site) const {
  std::vector<Real> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) out[i] = probability(i, site);
  return out;
}

PropagationResult propagate(const ChainModel& model, const StateVector& initial, const IntegratorConfig& cfg) {
  return propagate(model, initial, cfg, nullptr);
}

PropagationResult propagate(const ChainModel& model, const StateVector& initial, const IntegratorConfig& cfg,
                            std::vector<std::vector<Complex>>* sampled) {
  cfg.validate();
  const int cutoff = initial.cutoff();
  if (cutoff < 1) throw ModelError("degenerate truncation: cutoff must be >= 1");
  if (static_cast<std::size_t>(cutoff) > cfg.max_cutoff) throw ModelError("initial cutoff exceeds max_cutoff");
  if (initial.base_index() != base_index(model, static_cast<std::size_t>(cutoff)))
    throw ModelError("state window does not match the model's truncation window");
  if (sampled) sampled->clear();
  if (std::abs(1.0 - initial.norm_squared()) > cfg.leak_tol)
    throw ModelError("initial state is not normalized within leak_tol");

  const Tridiagonal h = build_hamiltonian(model, static_cast<std::size_t>(cutoff));
  const auto [lo, hi] = gershgorin_interval(h);
  DormandPrince rk(h, cfg.backend);

  PropagationResult out;
  out.cutoff_used = static_cast<std::size_t>(cutoff);
  out.base_index = initial.base_index();

  std::vector<Complex> y = initial.amplitudes();
  std::vector<Complex> sample(y.size());
  Real t = 0.0;
  std::size_t next = 0;
  while (next < cfg.sample_times.size() && cfg.sample_times[next] <= 0.0) record(out, y, cfg.sample_times[next++], sampled);

  const Real t_end = cfg.sample_times.back();
  const Real bound = std::max({std::abs(lo), std::abs(hi), 1e-12});
  Real step = std::min(0.5 / bound, t_end);
  kernels::schrodinger_rhs(cfg.backend, h, y, rk.first_stage());

  while (next < cfg.sample_times.size()) {
    if (out.steps_accepted + out.steps_rejected >= cfg.max_steps)
      throw IntegrationError("step budget exhausted before t = " + std::to_string(t_end));
    const bool last = t + step >= t_end;
    if (last) step = t_end - t;
    const Real err = rk.attempt(y, step, cfg.abs_tol, cfg.rel_tol);
    if (!std::isfinite(err)) {
      step *= 0.2;
      ++out.steps_rejected;
      continue;
    }
    const Real factor = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    if (err > 1.0) {
      step *= std::max(factor, 0.2);
      ++out.steps_rejected;
      if (step < 1e-14 * std::max(1.0, t_end)) throw IntegrationError("step size underflow");
      continue;
    }
    const Real t_old = t;
    rk.accept(y);
    t = last ? t_end : t + step;
    ++out.steps_accepted;
    while (next < cfg.sample_times.size() && cfg.sample_times[next] <= t) {
      const Real ts = cfg.sample_times[next];
      if (ts >= t) {
        record(out, y, ts, sampled);
      } else {
        rk.interpolate(y, t - t_old, (ts - t_old) / (t - t_old), sample);
        record(out, sample, ts, sampled);
      }
      ++next;
    }
    step *= factor;
  }

  const Real drift = std::abs(out.norm_leak.back());
  if (drift > 10.0 * cfg.leak_tol) {
    std::ostringstream msg;
    msg << "norm drift " << drift << " exceeds 10 x leak_tol";
    throw IntegrationError(msg.str());
  }
  return out;
}

std::optional<Real> revival_period(const ChainModel& model) {
  if (const auto* chain = std::get_if<UniformChain>(&model)) return analytic::revival_period_driven(chain->delta);
  if (const auto* par = std::get_if<ParametricTwoMode>(&model))
    return analytic::revival_period_parametric(par->g, par->delta).period;
  return analytic::revival_period_driven(std::get<DrivenOscillator>(model).delta);
}

std::size_t seed_cutoff(const ChainModel& model, Real t_max, Real leak_tol) {
  constexpr Real kSpread = 2.0;
  constexpr Real kMargin = 32.0;
  constexpr int kScan = 256;
  // Truncation errors enter at amplitude level, so bounded motions need the
  // occupation tail beyond N below leak_tol^2.
  const Real log_target = 2.0 * std::log(leak_tol);

  Real seed = 0.0;
  if (const auto* chain = std::get_if<UniformChain>(&model)) {
    const Real beta = std::abs(chain->beta);
    // Bloch excursion 4 beta/|delta|, or ballistic spread 2 beta t without bias.
    Real extent = 2.0 * beta * t_max;
    if (chain->delta != 0.0) extent = std::min(extent, 4.0 * beta / std::abs(chain->delta));
    seed = std::ceil(kSpread * extent) + kMargin;
  } else if (const auto* par = std::get_if<ParametricTwoMode>(&model)) {
    Real mean = 0.0;
    for (int i = 0; i <= kScan; ++i)
      mean = std::max(mean, analytic::mean_pairs_parametric(par->g, par->delta, t_max * i / kScan));
    if (analytic::revival_period_parametric(par->g, par->delta).regime == analytic::Regime::Discrete) {
      // Geometric occupations with ratio mean/(1+mean); population returns from the tail.
      seed = std::ceil(log_target / -std::log1p(1.0 / std::max(mean, 1e-300))) + kMargin;
    } else {
      // Unbounded growth: low-index occupations only feel the wall late.
      seed = std::ceil(kSpread * mean) + kMargin;
    }
  } else if (const auto* drv = std::get_if<DrivenOscillator>(&model)) {
    Real mean = 0.0;
    for (int i = 0; i <= kScan; ++i)
      mean = std::max(mean, std::norm(analytic::coherent_amplitude(drv->epsilon, drv->delta, t_max * i / kScan).alpha));
    if (drv->delta != 0.0) {
      // Past n = 2 mean successive Poisson terms at least halve, so the tail
      // beyond N is below 2 p_{N+1}; push that under leak_tol^2.
      const Real log_mean = std::log(std::max(mean, 1e-300));
      int n = static_cast<int>(std::ceil(2.0 * mean));
      while (std::log(2.0) - mean + (n + 1) * log_mean - std::lgamma(n + 2.0) > log_target) ++n;
      seed = n + kMargin;
    } else {
      seed = std::ceil(kSpread * mean) + kMargin;
    }
  }
  if (!std::isfinite(seed) || seed > 1e15) return static_cast<std::size_t>(1e15);
  return static_cast<std::size_t>(seed);
}

std::size_t adaptive_cutoff(const ChainModel& model, Real t_max, Real leak_tol, const CutoffOptions& opts) {
  validate(model);
  if (!(t_max >= 0.0)) throw ModelError("t_max must be >= 0");
  if (!(leak_tol > 0.0)) throw ModelError("leak_tol must be positive");

  std::size_t cutoff = std::max<std::size_t>(seed_cutoff(model, t_max, leak_tol), 2);
  if (cutoff > opts.max_cutoff) {
    std::ostringstream msg;
    msg << "truncation insufficient: analytic estimate needs cutoff " << cutoff << " > max_cutoff "
        << opts.max_cutoff;
    throw TruncationError(msg.str(), cutoff, 1.0);
  }
  if (t_max == 0.0) return cutoff;

  // Periodic motions repeat, so one period exercises the truncation fully.
  Real horizon = t_max;
  if (const auto period = revival_period(model)) horizon = std::min(horizon, *period);

  IntegratorConfig cfg;
  cfg.rel_tol = std::clamp(opts.rel_tol_scale * leak_tol, opts.min_rel_tol, 1e-8);
  cfg.abs_tol = 1e-2 * cfg.rel_tol;
  cfg.leak_tol = 1e-4;  // norm drift is not what this probe measures
  cfg.max_cutoff = 2 * opts.max_cutoff;
  cfg.backend = opts.backend;
  cfg.sample_times = uniform_times(horizon, std::max<std::size_t>(opts.probe_samples, 2));

  auto watched = [&](const PropagationResult& r, std::size_t i, int site) { return r.probability(i, site); };
  const int lo = -opts.watch_max;
  const int hi = opts.watch_max;

  for (;;) {
    const std::size_t wider = cutoff + std::max<std::size_t>(cutoff / 4, 8);
    const auto coarse = propagate(model, initial_vacuum(model, cutoff), cfg);
    const auto fine = propagate(model, initial_vacuum(model, wider), cfg);
    Real diff = 0.0;
    for (std::size_t i = 0; i < fine.times.size(); ++i)
      for (int site = lo; site <= hi; ++site)
        diff = std::max(diff, std::abs(watched(fine, i, site) - watched(coarse, i, site)));
    if (diff <= leak_tol) return cutoff;

    const Real edge = *std::max_element(coarse.boundary_population.begin(), coarse.boundary_population.end());
    if (cutoff * 2 > opts.max_cutoff) {
      std::ostringstream msg;
      msg << "truncation insufficient: cutoff " << cutoff << " leaves watched occupations uncertain by " << diff
          << " (boundary |C_N|^2 up to " << edge << "); doubling would exceed max_cutoff " << opts.max_cutoff;
      throw TruncationError(msg.str(), cutoff, edge);
    }
    cutoff *= 2;
  }
}

PropagationResult propagate_from_vacuum(const ChainModel& model, const IntegratorConfig& cfg, int watch_max) {
  cfg.validate();
  CutoffOptions opts;
  opts.max_cutoff = cfg.max_cutoff;
  opts.watch_max = watch_max;
  opts.backend = cfg.backend;
  const std::size_t cutoff = adaptive_cutoff(model, cfg.sample_times.back(), cfg.leak_tol, opts);
  return propagate(model, initial_vacuum(model, cutoff), cfg);
}

std::vector<Observables> observables(const PropagationResult& result) {
  std::vector<Observables> out(result.times.size());
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const auto& p = result.distributions[i];
    Observables obs;
    obs.survival = result.probability(i, 0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      const int site = result.base_index + static_cast<int>(k);
      obs.mean_n += site * p[k];
      if (p[k] > 0.0) obs.entropy -= p[k] * std::log(p[k]);
    }
    out[i] = obs;
  }
  return out;
}

}  // namespace fockbloch
