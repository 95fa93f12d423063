// scbf: runs the built-in safety experiments and writes CSV/JSON artifacts.
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scbf/errors.hpp"
#include "scbf/experiments.hpp"

namespace {

const std::vector<std::string> kStringKeys{"plant", "compensator", "certificate", "out"};
const std::vector<std::string> kNumberKeys{
    "alpha",         "beta",          "gamma", "c",       "U_M",    "N",
    "b",             "bs_saturation", "x0",    "u_o",     "dt",     "horizon",
    "paths",         "seed",          "record_stride",    "trajectory_paths",
    "grid_points",   "workers"};

struct Flags {
  std::optional<std::string> config;
  std::map<std::string, std::string> values;
};

nlohmann::json flag_overrides(const std::map<std::string, std::string>& values) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, raw] : values) {
    if (std::find(kStringKeys.begin(), kStringKeys.end(), key) != kStringKeys.end()) {
      doc[key] = raw;
    } else if (key == "a_values") {
      nlohmann::json arr = nlohmann::json::array();
      std::stringstream ss(raw);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto v = nlohmann::json::parse(item, nullptr, false);
        if (!v.is_number()) throw scbf::ConfigError("a_values: expected comma separated numbers");
        arr.push_back(v);
      }
      doc[key] = arr;
    } else {
      const auto v = nlohmann::json::parse(raw, nullptr, false);
      if (!v.is_number()) throw scbf::ConfigError(key + ": expected a number, got '" + raw + "'");
      doc[key] = v;
    }
  }
  return doc;
}

int run(const std::string& experiment, const Flags& flags) {
  try {
    const auto it = flags.values.find("plant");
    const std::string plant = it == flags.values.end() ? "" : it->second;
    scbf::ExperimentConfig cfg = flags.config ? scbf::load_config(*flags.config, experiment, plant)
                                              : scbf::default_config(experiment, plant);
    if (flags.config && cfg.experiment != experiment) {
      // The subcommand decides what runs; file defaults for another experiment would mislead.
      throw scbf::ConfigError("experiment: config file is for '" + cfg.experiment +
                              "' but the subcommand is '" + experiment + "'");
    }
    scbf::apply_json(cfg, flag_overrides(flags.values));
    const scbf::RunResult result = scbf::run_experiment(cfg);
    std::cout << result.summary;
    std::cout << "artifacts written to " << cfg.out.string() << "\n";
    return result.exit_code;
  } catch (const scbf::NumericalBlowup& e) {
    std::cerr << "numerical blowup: " << e.what() << "\n";
    return scbf::kExitBlowup;
  } catch (const scbf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return scbf::kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return scbf::kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic control barrier function experiments"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> descriptions{
      {"motivation", "deterministic ZCBF versus reciprocal compensator near the boundary"},
      {"example1", "safe half-line with input saturation"},
      {"example2", "safe interval with input saturation"},
      {"sweep", "exit probability versus diffusion scale a"},
      {"check", "certificate checks on a built-in plant"},
      {"simulate", "ensemble simulation of a built-in plant"}};

  std::map<std::string, Flags> flags;
  for (const auto& [name, text] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, text);
    Flags& f = flags[name];
    sub->add_option_function<std::string>("--config", [&f](const std::string& v) { f.config = v; },
                                          "JSON config file");
    for (const auto& key : kStringKeys) {
      sub->add_option_function<std::string>("--" + key, [&f, key](const std::string& v) { f.values[key] = v; });
    }
    for (const auto& key : kNumberKeys) {
      sub->add_option_function<std::string>("--" + key, [&f, key](const std::string& v) { f.values[key] = v; });
    }
    sub->add_option_function<std::string>(
        "--a_values", [&f](const std::string& v) { f.values["a_values"] = v; },
        "comma separated diffusion scales");
  }

  CLI11_PARSE(app, argc, argv);
  for (const auto& [name, f] : flags) {
    if (app.got_subcommand(name)) return run(name, f);
  }
  return scbf::kExitValidation;
}
