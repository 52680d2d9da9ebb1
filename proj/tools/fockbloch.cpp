// fockbloch: command-line driver for scenarios, spectra, revivals and figure presets.
#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <string>

#include "fockbloch/scenario.hpp"

namespace {

using fockbloch::cli::RawConfig;

/// Registers one string flag per config key; "g_abs" becomes "--g-abs".
class FlagSet {
 public:
  void attach(CLI::App& app, bool with_output) {
    for (const auto& key : fockbloch::cli::config_keys()) {
      if (!with_output && (key == "output" || key == "name")) continue;
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      const std::string names = key == "output" ? "-o,--output" : "--" + flag;
      app.add_option(names, values_[key], "config field '" + key + "'");
    }
    app.add_option("-c,--config", config_path_, "flat key = value config file");
  }

  /// File values first, then flags on top.
  RawConfig collect(CLI::App& app, bool include_file = true) const {
    RawConfig raw;
    if (include_file && !config_path_.empty()) raw = fockbloch::cli::read_config_file(config_path_);
    RawConfig flags;
    for (const auto& [key, value] : values_) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (app.count("--" + flag)) flags[key] = {value, "--" + flag};
    }
    fockbloch::cli::merge_into(raw, flags);
    return raw;
  }

 private:
  std::map<std::string, std::string> values_;
  std::string config_path_;
};

}  // namespace

int main(int argc, char** argv) {
  namespace cli = fockbloch::cli;
  CLI::App app{"Revivals and Fock-space Bloch oscillations in driven bosonic chains"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "propagate from the vacuum and write p_n(t)");
  auto* spectrum = app.add_subcommand("spectrum", "diagonalize truncated Hamiltonians and judge convergence");
  auto* revivals = app.add_subcommand("revivals", "detect survival revivals against the predicted period");
  auto* ion = app.add_subcommand("ion", "map Raman parameters to a driven oscillator and simulate it");
  auto* figure = app.add_subcommand("figure", "reproduce a figure preset (1, 2a, 2b, 3a-3d, or groups 2, 3, all)");

  FlagSet sim_flags, spec_flags, rev_flags, ion_flags, fig_flags;
  sim_flags.attach(*simulate, true);
  spec_flags.attach(*spectrum, true);
  rev_flags.attach(*revivals, true);
  ion_flags.attach(*ion, true);
  fig_flags.attach(*figure, false);

  std::string figure_id;
  std::string figure_dir = ".";
  figure->add_option("id", figure_id, "preset id")->required();
  figure->add_option("-d,--dir", figure_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kBadConfig;
  }

  try {
    if (figure->parsed()) return cli::run_figure(figure_id, figure_dir, fig_flags.collect(*figure), std::cout, std::cerr);

    auto load = [](FlagSet& flags, CLI::App& sub) { return cli::scenario_from_raw(flags.collect(sub)); };
    if (simulate->parsed()) return cli::run_scenario(load(sim_flags, *simulate), std::cout, std::cerr);
    if (spectrum->parsed()) return cli::run_spectrum(load(spec_flags, *spectrum), std::cout, std::cerr);
    if (revivals->parsed()) return cli::run_revivals(load(rev_flags, *revivals), std::cout, std::cerr);
    if (ion->parsed()) {
      RawConfig raw = ion_flags.collect(*ion);
      if (!raw.count("model")) raw["model"] = {"ion", "ion"};
      return cli::run_ion(cli::scenario_from_raw(raw), std::cout, std::cerr);
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kBadConfig;
  }
  return cli::kFailure;
}
