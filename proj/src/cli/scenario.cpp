#include "fockbloch/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <json.hpp>
#include <numbers>
#include <set>
#include <sstream>
#include <variant>

#include "fockbloch/analytic.hpp"

namespace fockbloch::cli {

namespace {

constexpr Real kPi = std::numbers::pi;

std::string fmt17(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "name",     "model",    "g_abs",   "g_phase", "epsilon_abs", "epsilon_phase", "delta",   "beta",
      "two_sided", "t_max",   "samples", "n",       "output",      "format",        "rel_tol", "abs_tol",
      "leak_tol", "max_cutoff", "backend", "threshold", "cutoffs",  "k",             "omega1",  "omega2",
      "nu",       "e1_abs",   "e1_phase", "e2_abs",  "e2_phase",   "kappa"};
  return keys;
}

namespace {

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string origin(const std::string& key) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? std::string("config") : it->second.origin;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second.text;
  }

  Real real(const std::string& key, Real fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    return parse_real(key, it->second);
  }

  long long integer(const std::string& key, long long fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    return parse_int(key, it->second.text, it->second.origin);
  }

  bool boolean(const std::string& key, bool fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    const auto& v = it->second.text;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(it->second.origin, "field '" + key + "': expected true/false, got '" + v + "'");
  }

  std::vector<long long> int_list(const std::string& key, std::vector<long long> fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    std::vector<long long> out;
    std::stringstream ss(it->second.text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (const auto dots = item.find(".."); dots != std::string::npos) {
        const auto lo = parse_int(key, trim(item.substr(0, dots)), it->second.origin);
        const auto hi = parse_int(key, trim(item.substr(dots + 2)), it->second.origin);
        if (hi < lo) throw ConfigError(it->second.origin, "field '" + key + "': empty range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(parse_int(key, item, it->second.origin));
      }
    }
    if (out.empty()) throw ConfigError(it->second.origin, "field '" + key + "': empty list");
    return out;
  }

  /// Keys that were provided but never consumed.
  void reject_unused() const {
    for (const auto& [key, value] : raw_)
      if (!used_.count(key) && key.rfind("result.", 0) != 0)
        throw ConfigError(value.origin, "field '" + key + "' is not used by this model");
  }

 private:
  static Real parse_real(const std::string& key, const RawValue& v) {
    const std::string& s = v.text;
    Real out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out))
      throw ConfigError(v.origin, "field '" + key + "': expected a finite real number, got '" + s + "'");
    return out;
  }

  static long long parse_int(const std::string& key, const std::string& s, const std::string& origin) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError(origin, "field '" + key + "': expected an integer, got '" + s + "'");
    return out;
  }

  const RawConfig& raw_;
  std::set<std::string> used_;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

RawConfig parse_config_text(const std::string& text, const std::string& source) {
  RawConfig out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = source + " line " + std::to_string(number);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where, "missing key");
    if (!config_keys().count(key) && key.rfind("result.", 0) != 0) throw ConfigError(where, "unknown field '" + key + "'");
    if (out.count(key)) throw ConfigError(where, "duplicate field '" + key + "'");
    out[key] = {value, where};
  }
  return out;
}

RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void merge_into(RawConfig& base, const RawConfig& overrides) {
  for (const auto& [key, value] : overrides) {
    if (!config_keys().count(key)) throw ConfigError(value.origin, "unknown field '" + key + "'");
    base[key] = value;
  }
}

ScenarioConfig scenario_from_raw(const RawConfig& raw) {
  Reader r(raw);
  ScenarioConfig cfg;
  cfg.name = r.text("name", "run");
  const std::string model = r.text("model", "parametric");

  auto check_model = [&](const ChainModel& m) {
    try {
      validate(m);
    } catch (const ModelError& e) {
      throw ConfigError(r.origin("model"), e.what());
    }
  };

  if (model == "parametric") {
    ParametricTwoMode m;
    m.g = std::polar(r.real("g_abs", 1.0), r.real("g_phase", 0.0));
    m.delta = r.real("delta", 0.0);
    if (!(std::abs(m.g) > 0.0)) throw ConfigError(r.origin("g_abs"), "field 'g_abs': must be > 0");
    cfg.model = m;
  } else if (model == "driven") {
    DrivenOscillator m;
    m.epsilon = std::polar(r.real("epsilon_abs", 1.0), r.real("epsilon_phase", 0.0));
    m.delta = r.real("delta", 0.0);
    if (!(std::abs(m.epsilon) > 0.0))
      throw ConfigError(r.origin("epsilon_abs"), "field 'epsilon_abs': must be > 0");
    cfg.model = m;
  } else if (model == "chain") {
    UniformChain m;
    m.beta = r.real("beta", 1.0);
    m.delta = r.real("delta", 0.0);
    m.two_sided = r.boolean("two_sided", true);
    cfg.model = m;
  } else if (model == "ion") {
    IonRamanParams p;
    p.omega1 = r.real("omega1", 0.0);
    p.omega2 = r.real("omega2", 0.0);
    p.nu = r.real("nu", 1.0);
    p.e1 = std::polar(r.real("e1_abs", 1.0), r.real("e1_phase", 0.0));
    p.e2 = std::polar(r.real("e2_abs", 1.0), r.real("e2_phase", 0.0));
    p.kappa = r.real("kappa", 1.0);
    try {
      cfg.model = analytic::map_raman_to_effective(p).model;
    } catch (const ModelError& e) {
      throw ConfigError(r.origin("model"), e.what());
    }
    cfg.ion = p;
  } else {
    throw ConfigError(r.origin("model"), "field 'model': expected parametric, driven, chain or ion, got '" + model + "'");
  }
  check_model(cfg.model);

  Real default_t_max = 4.0;
  if (cfg.ion) {
    if (const auto period = analytic::revival_period_driven(std::get<DrivenOscillator>(cfg.model).delta))
      default_t_max = 2.2 * *period;
  }
  cfg.t_max = r.real("t_max", default_t_max);
  if (!(cfg.t_max > 0.0)) throw ConfigError(r.origin("t_max"), "field 't_max': must be > 0");
  const auto samples = r.integer("samples", 401);
  if (samples < 2) throw ConfigError(r.origin("samples"), "field 'samples': must be >= 2");
  cfg.samples = static_cast<std::size_t>(samples);

  cfg.n_list.clear();
  for (const auto n : r.int_list("n", {0, 1, 2, 3})) {
    if (n < 0) throw ConfigError(r.origin("n"), "field 'n': entries must be >= 0");
    cfg.n_list.push_back(static_cast<int>(n));
  }

  cfg.output_path = r.text("output", "");
  const std::string format = r.text("format", "csv");
  if (format == "csv")
    cfg.format = OutputFormat::Csv;
  else if (format == "json")
    cfg.format = OutputFormat::Json;
  else
    throw ConfigError(r.origin("format"), "field 'format': expected csv or json, got '" + format + "'");

  auto& integ = cfg.integrator;
  integ.rel_tol = r.real("rel_tol", integ.rel_tol);
  integ.abs_tol = r.real("abs_tol", integ.abs_tol);
  integ.leak_tol = r.real("leak_tol", integ.leak_tol);
  for (const auto* key : {"rel_tol", "abs_tol", "leak_tol"}) {
    const Real v = key == std::string("rel_tol") ? integ.rel_tol : key == std::string("abs_tol") ? integ.abs_tol : integ.leak_tol;
    if (!(v > 0.0 && v < 1e-3)) throw ConfigError(r.origin(key), std::string("field '") + key + "': must lie in (0, 1e-3)");
  }
  std::size_t env_ceiling = 4096;
  try {
    env_ceiling = max_cutoff_from_env(4096);
  } catch (const ModelError& e) {
    throw ConfigError("environment", e.what());
  }
  const auto max_cutoff = r.integer("max_cutoff", static_cast<long long>(env_ceiling));
  if (max_cutoff < 1) throw ConfigError(r.origin("max_cutoff"), "field 'max_cutoff': must be >= 1");
  integ.max_cutoff = static_cast<std::size_t>(max_cutoff);
  try {
    integ.backend = kernels::backend_from_string(r.text("backend", "openmp"));
  } catch (const ModelError& e) {
    throw ConfigError(r.origin("backend"), e.what());
  }

  cfg.threshold = r.real("threshold", cfg.threshold);
  if (!(cfg.threshold > 0.5 && cfg.threshold < 1.0))
    throw ConfigError(r.origin("threshold"), "field 'threshold': must lie in (0.5, 1)");

  const auto k = r.integer("k", 5);
  if (k < 1) throw ConfigError(r.origin("k"), "field 'k': must be >= 1");
  cfg.k = static_cast<std::size_t>(k);
  cfg.cutoffs.clear();
  for (const auto c : r.int_list("cutoffs", {100, 200, 400})) {
    if (c < static_cast<long long>(cfg.k) + 1)
      throw ConfigError(r.origin("cutoffs"), "field 'cutoffs': every cutoff must be >= k + 1");
    if (!cfg.cutoffs.empty() && static_cast<std::size_t>(c) <= cfg.cutoffs.back())
      throw ConfigError(r.origin("cutoffs"), "field 'cutoffs': must be strictly increasing");
    cfg.cutoffs.push_back(static_cast<std::size_t>(c));
  }

  r.reject_unused();
  return cfg;
}

std::string to_config_text(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "name = " << cfg.name << "\n";
  if (cfg.ion) {
    const auto& p = *cfg.ion;
    out << "model = ion\n"
        << "omega1 = " << fmt17(p.omega1) << "\nomega2 = " << fmt17(p.omega2) << "\nnu = " << fmt17(p.nu) << "\n"
        << "e1_abs = " << fmt17(std::abs(p.e1)) << "\ne1_phase = " << fmt17(std::arg(p.e1)) << "\n"
        << "e2_abs = " << fmt17(std::abs(p.e2)) << "\ne2_phase = " << fmt17(std::arg(p.e2)) << "\n"
        << "kappa = " << fmt17(p.kappa) << "\n";
  } else {
    std::visit(Overloaded{
                   [&](const ParametricTwoMode& m) {
                     out << "model = parametric\ng_abs = " << fmt17(std::abs(m.g)) << "\ng_phase = " << fmt17(std::arg(m.g))
                         << "\ndelta = " << fmt17(m.delta) << "\n";
                   },
                   [&](const DrivenOscillator& m) {
                     out << "model = driven\nepsilon_abs = " << fmt17(std::abs(m.epsilon))
                         << "\nepsilon_phase = " << fmt17(std::arg(m.epsilon)) << "\ndelta = " << fmt17(m.delta) << "\n";
                   },
                   [&](const UniformChain& m) {
                     out << "model = chain\nbeta = " << fmt17(m.beta) << "\ndelta = " << fmt17(m.delta)
                         << "\ntwo_sided = " << (m.two_sided ? "true" : "false") << "\n";
                   },
               },
               cfg.model);
  }
  out << "t_max = " << fmt17(cfg.t_max) << "\nsamples = " << cfg.samples << "\nn = ";
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) out << (i ? "," : "") << cfg.n_list[i];
  out << "\n";
  if (!cfg.output_path.empty()) out << "output = " << cfg.output_path << "\n";
  out << "format = " << (cfg.format == OutputFormat::Csv ? "csv" : "json") << "\n"
      << "rel_tol = " << fmt17(cfg.integrator.rel_tol) << "\nabs_tol = " << fmt17(cfg.integrator.abs_tol)
      << "\nleak_tol = " << fmt17(cfg.integrator.leak_tol) << "\nmax_cutoff = " << cfg.integrator.max_cutoff
      << "\nbackend = " << kernels::to_string(cfg.integrator.backend) << "\nthreshold = " << fmt17(cfg.threshold)
      << "\nk = " << cfg.k << "\ncutoffs = ";
  for (std::size_t i = 0; i < cfg.cutoffs.size(); ++i) out << (i ? "," : "") << cfg.cutoffs[i];
  out << "\n";
  return out.str();
}

std::vector<std::string> preset_names() { return {"1", "2a", "2b", "3a", "3b", "3c", "3d"}; }

RawConfig preset(const std::string& id) {
  const std::string name = id.rfind("figure", 0) == 0 ? id.substr(6) : id;
  RawConfig raw;
  auto set = [&](const std::string& key, const std::string& value) { raw[key] = {value, "preset figure" + name}; };
  set("name", "figure" + name);
  if (name == "1") {
    set("model", "parametric");
    set("g_abs", "1");
    set("delta", "0");
    set("t_max", "4");
    set("samples", "801");
    set("n", "0..3");
  } else if (name == "2a" || name == "2b") {
    // delta / 2|G| = 1.01 and 1.10; two revival periods plus margin.
    const Real delta = name == "2a" ? 2.02 : 2.2;
    const Real period = kPi / std::sqrt(delta * delta / 4.0 - 1.0);
    set("model", "parametric");
    set("g_abs", "1");
    set("delta", fmt17(delta));
    set("t_max", fmt17(2.2 * period));
    set("samples", name == "2a" ? "4001" : "1501");
    set("n", "0..3");
    if (name == "2a") set("leak_tol", "1e-6");
  } else if (name.size() == 2 && name[0] == '3' && name[1] >= 'a' && name[1] <= 'd') {
    // delta / 2|eps| = 0, 0.5, 1, 2.
    const Real ratio[] = {0.0, 0.5, 1.0, 2.0};
    const Real delta = 2.0 * ratio[name[1] - 'a'];
    const Real t_max = delta == 0.0 ? 4.0 : std::max(4.0, 2.2 * 2.0 * kPi / delta);
    set("model", "driven");
    set("epsilon_abs", "1");
    set("delta", fmt17(delta));
    set("t_max", fmt17(t_max));
    set("samples", "801");
    set("n", "0..2");
  } else {
    throw ConfigError("figure", "unknown preset '" + name + "' (expected 1, 2a, 2b, 3a, 3b, 3c or 3d)");
  }
  return raw;
}

std::string time_unit(const ChainModel& model) {
  return std::visit(Overloaded{
                        [](const ParametricTwoMode&) { return std::string("1/|G|"); },
                        [](const DrivenOscillator&) { return std::string("1/|eps|"); },
                        [](const UniformChain&) { return std::string("1/beta"); },
                    },
                    model);
}

Real time_scale(const ChainModel& model) {
  return std::visit(Overloaded{
                        [](const ParametricTwoMode& m) { return std::abs(m.g); },
                        [](const DrivenOscillator& m) { return std::abs(m.epsilon); },
                        [](const UniformChain& m) { return std::abs(m.beta); },
                    },
                    model);
}

ScenarioRun simulate(const ScenarioConfig& cfg) {
  ScenarioRun run;
  run.config = cfg;
  run.config.integrator.sample_times = uniform_times(cfg.t_max, cfg.samples);
  const int watch = std::max(1, *std::max_element(cfg.n_list.begin(), cfg.n_list.end()));
  const auto start = std::chrono::steady_clock::now();
  run.result = propagate_from_vacuum(cfg.model, run.config.integrator, watch);
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.obs = observables(run.result);
  return run;
}

std::string format_csv(const ScenarioRun& run) {
  std::ostringstream out;
  out << "t,scaled_t";
  for (const int n : run.config.n_list) out << ",p_" << n;
  out << ",survival,mean_n,norm_leak,boundary\n";
  const Real scale = time_scale(run.config.model);
  for (std::size_t i = 0; i < run.result.times.size(); ++i) {
    const Real t = run.result.times[i];
    out << fmt17(t) << ',' << fmt17(scale * t);
    for (const int n : run.config.n_list) out << ',' << fmt17(run.result.probability(i, n));
    out << ',' << fmt17(run.obs[i].survival) << ',' << fmt17(run.obs[i].mean_n) << ','
        << fmt17(run.result.norm_leak[i]) << ',' << fmt17(run.result.boundary_population[i]) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::ordered_json result_json(const ScenarioRun& run) {
  nlohmann::ordered_json res;
  res["units"] = "hbar = 1; time in units of " + time_unit(run.config.model);
  res["cutoff_used"] = run.result.cutoff_used;
  res["base_index"] = run.result.base_index;
  res["steps_accepted"] = run.result.steps_accepted;
  res["steps_rejected"] = run.result.steps_rejected;
  return res;
}

}  // namespace

std::string format_json(const ScenarioRun& run) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json config;
  for (const auto& [key, value] : parse_config_text(to_config_text(run.config))) config[key] = value.text;
  doc["config"] = config;
  doc["result"] = result_json(run);
  nlohmann::ordered_json cols;
  const Real scale = time_scale(run.config.model);
  std::vector<Real> scaled(run.result.times.size());
  std::transform(run.result.times.begin(), run.result.times.end(), scaled.begin(), [&](Real t) { return scale * t; });
  cols["t"] = run.result.times;
  cols["scaled_t"] = scaled;
  for (const int n : run.config.n_list) cols["p_" + std::to_string(n)] = run.result.series(n);
  std::vector<Real> survival, mean_n;
  for (const auto& o : run.obs) {
    survival.push_back(o.survival);
    mean_n.push_back(o.mean_n);
  }
  cols["survival"] = survival;
  cols["mean_n"] = mean_n;
  cols["norm_leak"] = run.result.norm_leak;
  cols["boundary"] = run.result.boundary_population;
  doc["columns"] = cols;
  return doc.dump(1) + "\n";
}

std::string manifest_text(const ScenarioRun& run) {
  std::ostringstream out;
  out << "# fockbloch run manifest; feed back with --config to repeat the run\n" << to_config_text(run.config);
  out << "result.units = hbar = 1; time in units of " << time_unit(run.config.model) << "\n"
      << "result.cutoff_used = " << run.result.cutoff_used << "\n"
      << "result.steps_accepted = " << run.result.steps_accepted << "\n"
      << "result.steps_rejected = " << run.result.steps_rejected << "\n"
      << "result.final_norm_leak = " << fmt17(run.result.norm_leak.back()) << "\n"
      << "result.wall_seconds = " << fmt17(run.wall_seconds) << "\n";
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

void write_outputs(const ScenarioRun& run) {
  if (run.config.output_path.empty()) return;
  write_file(run.config.output_path, run.config.format == OutputFormat::Csv ? format_csv(run) : format_json(run));
  write_file(run.config.output_path + ".manifest", manifest_text(run));
}

SpectrumRun run_spectrum_analysis(const ScenarioConfig& cfg) {
  SpectrumRun run;
  run.config = cfg;
  run.scan = spectrum::convergence_scan(cfg.model, cfg.cutoffs, cfg.k);
  run.largest = spectrum::diagonalize(cfg.model, cfg.cutoffs.back());
  try {
    run.spacing = spectrum::spacing_check(run.largest, cfg.model);
  } catch (const ModelError&) {
    // continuum regimes have no ladder to compare against
  }
  const int levels = static_cast<int>(std::max<std::size_t>(cfg.k, 10)) - 1;
  if (const auto* par = std::get_if<ParametricTwoMode>(&cfg.model)) {
    if (par->delta > 0.0 && analytic::beta0_squared(par->g, par->delta) > 0.0)
      run.predicted = analytic::eigenvalues_parametric(par->g, par->delta, 0, levels);
  } else if (const auto* drv = std::get_if<DrivenOscillator>(&cfg.model)) {
    if (drv->delta > 0.0) run.predicted = analytic::eigenvalues_driven(drv->epsilon, drv->delta, levels);
  }
  return run;
}

std::string format_spectrum_csv(const SpectrumRun& run) {
  std::ostringstream out;
  out << "cutoff,level,eigenvalue,converged,predicted\n";
  const std::size_t levels = std::max<std::size_t>(run.config.k, 10);
  for (std::size_t c = 0; c < run.scan.cutoffs.size(); ++c) {
    const bool last = c + 1 == run.scan.cutoffs.size();
    const std::size_t count = last ? std::min(levels, run.largest.eigenvalues.size()) : run.scan.lowest[c].size();
    for (std::size_t j = 0; j < count; ++j) {
      const Real e = last ? run.largest.eigenvalues[j] : run.scan.lowest[c][j];
      out << run.scan.cutoffs[c] << ',' << j << ',' << fmt17(e) << ',';
      out << (last ? (run.largest.converged_mask[j] ? "1" : "0") : "") << ',';
      if (j < run.predicted.size()) out << fmt17(run.predicted[j]);
      out << '\n';
    }
  }
  return out.str();
}

RevivalRun run_revival_analysis(const ScenarioConfig& cfg) {
  RevivalRun run;
  run.scenario = simulate(cfg);
  run.report = analysis::build_report(cfg.model, run.scenario.result, cfg.threshold);
  return run;
}

namespace {

std::string describe(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "# " << cfg.name << ": model=" << model_name(cfg.model);
  std::visit(Overloaded{
                 [&](const ParametricTwoMode& m) { out << " |G|=" << std::abs(m.g) << " delta=" << m.delta; },
                 [&](const DrivenOscillator& m) { out << " |eps|=" << std::abs(m.epsilon) << " delta=" << m.delta; },
                 [&](const UniformChain& m) {
                   out << " beta=" << m.beta << " delta=" << m.delta << (m.two_sided ? " two-sided" : " one-sided");
                 },
             },
             cfg.model);
  out << "\n# units: hbar = 1, time in units of " << time_unit(cfg.model) << "\n";
  return out.str();
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << "\n";
    return kTruncation;
  } catch (const ModelError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto run = simulate(cfg);
    write_outputs(run);
    out << describe(cfg) << "# cutoff " << run.result.cutoff_used << ", final norm leak "
        << run.result.norm_leak.back() << ", " << run.result.steps_accepted << " steps\n";
    if (!cfg.output_path.empty()) out << "# wrote " << cfg.output_path << "\n";
    return static_cast<int>(kOk);
  });
}

int run_spectrum(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto run = run_spectrum_analysis(cfg);
    out << describe(cfg);
    out << "# verdict: " << (run.scan.verdict ? spectrum::to_string(*run.scan.verdict) : std::string("withheld"))
        << " (drift " << run.scan.drift << " between cutoffs " << cfg.cutoffs[cfg.cutoffs.size() - 2] << " and "
        << cfg.cutoffs.back() << "; pin < " << run.scan.pin_tol << ", continuum > "
        << run.scan.drift_tol * run.scan.scale << ")\n";
    if (run.spacing)
      out << "# spacing: expected " << fmt17(run.spacing->expected) << ", measured mean "
          << fmt17(run.spacing->measured_mean) << ", max deviation " << run.spacing->max_dev << " over "
          << run.spacing->levels_used << " converged levels\n";
    const std::string table = format_spectrum_csv(run);
    if (cfg.output_path.empty()) {
      out << table;
    } else {
      std::ostringstream manifest;
      manifest << "# fockbloch spectrum manifest\n" << to_config_text(cfg);
      manifest << "result.verdict = "
               << (run.scan.verdict ? spectrum::to_string(*run.scan.verdict) : std::string("withheld")) << "\n"
               << "result.drift = " << fmt17(run.scan.drift) << "\n";
      if (run.spacing)
        manifest << "result.spacing_expected = " << fmt17(run.spacing->expected) << "\n"
                 << "result.spacing_measured = " << fmt17(run.spacing->measured_mean) << "\n";
      write_file(cfg.output_path, table);
      write_file(cfg.output_path + ".manifest", manifest.str());
      out << "# wrote " << cfg.output_path << "\n";
    }
    return static_cast<int>(kOk);
  });
}

int run_revivals(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto run = run_revival_analysis(cfg);
    write_outputs(run.scenario);
    const auto& rep = run.report;
    out << describe(cfg) << "# verdict: " << analysis::to_string(rep.verdict) << " (" << rep.note << ")\n";
    out << "# predicted period: " << (rep.predicted_period ? fmt17(*rep.predicted_period) : std::string("none")) << "\n";
    if (rep.detected_period) out << "# detected period: " << fmt17(*rep.detected_period) << "\n";
    out << "# max discrepancy: " << rep.max_discrepancy << "\nrevival,time,survival\n";
    for (std::size_t i = 0; i < rep.detected_times.size(); ++i) {
      const Real t = rep.detected_times[i];
      const auto& times = run.scenario.result.times;
      const auto near = std::min<std::size_t>(
          static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t) - times.begin()), times.size() - 1);
      out << i + 1 << ',' << fmt17(t) << ',' << fmt17(run.scenario.obs[near].survival) << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int run_ion(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!cfg.ion) throw ConfigError("ion", "ion parameters missing (model = ion)");
    const auto eff = analytic::map_raman_to_effective(*cfg.ion);
    out << "# effective detuning delta = omega1 - omega2 - nu = " << fmt17(eff.model.delta) << "\n"
        << "# effective drive |eps| = " << fmt17(std::abs(eff.model.epsilon)) << "\n";
    if (const auto period = analytic::revival_period_driven(eff.model.delta))
      out << "# predicted ground-state revival period 2 pi/delta = " << fmt17(*period) << "\n";
    if (eff.resonant) err << "warning: " << eff.warning << "\n";
    ScenarioConfig driven = cfg;
    driven.model = eff.model;
    const auto run = simulate(driven);
    write_outputs(run);
    out << describe(driven) << "# cutoff " << run.result.cutoff_used << "\n";
    if (const auto period = analytic::revival_period_driven(eff.model.delta); period && cfg.t_max >= 2.0 * *period) {
      const auto rep = analysis::build_report(driven.model, run.result, cfg.threshold);
      out << "# revival verdict: " << analysis::to_string(rep.verdict);
      for (const Real t : rep.detected_times) out << " " << fmt17(t);
      out << "\n";
    }
    if (!cfg.output_path.empty()) out << "# wrote " << cfg.output_path << "\n";
    return static_cast<int>(kOk);
  });
}

int run_figure(const std::string& id, const std::string& dir, const RawConfig& overrides, std::ostream& out,
               std::ostream& err) {
  const std::string name = id.rfind("figure", 0) == 0 ? id.substr(6) : id;
  std::vector<std::string> members;
  if (name == "all")
    members = preset_names();
  else if (name == "2")
    members = {"2a", "2b"};
  else if (name == "3")
    members = {"3a", "3b", "3c", "3d"};
  else
    members = {name};

  struct Outcome {
    int code = kOk;
    std::string out, err;
  };
  std::vector<std::future<Outcome>> jobs;
  for (const auto& member : members) {
    jobs.push_back(std::async(std::launch::async, [&, member] {
      Outcome o;
      std::ostringstream os, es;
      o.code = guarded(es, [&] {
        RawConfig raw = preset(member);
        merge_into(raw, overrides);
        if (!raw.count("output"))
          raw["output"] = {(std::filesystem::path(dir) / ("figure" + member + ".csv")).string(), "figure"};
        const auto cfg = scenario_from_raw(raw);
        return run_scenario(cfg, os, es);
      });
      o.out = os.str();
      o.err = es.str();
      return o;
    }));
  }
  int code = kOk;
  for (auto& job : jobs) {
    const auto o = job.get();
    out << o.out;
    err << o.err;
    code = std::max(code, o.code);
  }
  return code;
}

}  // namespace fockbloch::cli
