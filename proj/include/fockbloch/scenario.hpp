#pragma once

// Scenario configuration and runners behind the command-line tool.

#include <map>
#include <set>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockbloch/analysis.hpp"
#include "fockbloch/core.hpp"
#include "fockbloch/propagate.hpp"
#include "fockbloch/spectrum.hpp"

namespace fockbloch::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kBadConfig = 2, kTruncation = 3 };

/// Invalid configuration; `where` names the line or flag.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// A raw value and where it came from ("line 3", "--delta", "preset").
struct RawValue {
  std::string text;
  std::string origin;
};
using RawConfig = std::map<std::string, RawValue>;

/// Parses the flat `key = value` format; '#' starts a comment.
RawConfig parse_config_text(const std::string& text, const std::string& source = "config");
RawConfig read_config_file(const std::string& path);
/// Later entries win.
void merge_into(RawConfig& base, const RawConfig& overrides);

/// Every key accepted in a config file.
const std::set<std::string>& config_keys();

enum class OutputFormat { Csv, Json };

struct ScenarioConfig {
  std::string name = "run";
  ChainModel model = ParametricTwoMode{};
  Real t_max = 4.0;
  std::size_t samples = 401;
  std::vector<int> n_list{0, 1, 2, 3};
  std::string output_path;  // empty: no files
  OutputFormat format = OutputFormat::Csv;
  IntegratorConfig integrator;  // sample_times filled at run time
  Real threshold = analysis::kDefaultThreshold;
  std::vector<std::size_t> cutoffs{100, 200, 400};
  std::size_t k = 5;
  std::optional<IonRamanParams> ion;
};

/// Builds and validates a scenario; unknown keys and bad values raise ConfigError.
ScenarioConfig scenario_from_raw(const RawConfig& raw);

/// Flat key = value rendering of a scenario; parsing it back gives the same scenario.
std::string to_config_text(const ScenarioConfig& cfg);

/// Named figure presets: "1", "2a", "2b", "3a".."3d".
std::vector<std::string> preset_names();
RawConfig preset(const std::string& name);

/// Time unit 1/|G|, 1/|eps| or 1/beta for the model.
std::string time_unit(const ChainModel& model);
Real time_scale(const ChainModel& model);

struct ScenarioRun {
  ScenarioConfig config;
  PropagationResult result;
  std::vector<Observables> obs;
  double wall_seconds = 0.0;
};

/// Propagates from the vacuum at an adaptive cutoff. Throws TruncationError.
ScenarioRun simulate(const ScenarioConfig& cfg);

/// Time-series table: t, scaled_t, p_<n>..., survival, mean_n, norm_leak, boundary.
std::string format_csv(const ScenarioRun& run);
std::string format_json(const ScenarioRun& run);
std::string manifest_text(const ScenarioRun& run);

/// Writes the table (and `<path>.manifest`) if an output path is set.
void write_outputs(const ScenarioRun& run);

struct SpectrumRun {
  ScenarioConfig config;
  spectrum::ConvergenceScan scan;
  spectrum::SpectrumResult largest;
  std::optional<spectrum::SpacingCheck> spacing;
  std::vector<Real> predicted;  // analytic ladder when discrete
};

SpectrumRun run_spectrum_analysis(const ScenarioConfig& cfg);
std::string format_spectrum_csv(const SpectrumRun& run);

struct RevivalRun {
  ScenarioRun scenario;
  analysis::RevivalReport report;
};

RevivalRun run_revival_analysis(const ScenarioConfig& cfg);

// Entry points used by the executable; each returns an ExitCode and reports
// to the given streams.
int run_scenario(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);
int run_spectrum(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);
int run_revivals(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);
int run_ion(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);
/// Runs one preset, or every member of a group ("2", "3", "all") concurrently,
/// writing <dir>/figure<name>.csv for each.
int run_figure(const std::string& name, const std::string& dir, const RawConfig& overrides, std::ostream& out,
               std::ostream& err);

}  // namespace fockbloch::cli
