#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scbf/certificates.hpp"
#include "scbf/compensators.hpp"
#include "scbf/grid.hpp"
#include "scbf/safe_set.hpp"
#include "scbf/sde_sim.hpp"

namespace scbf {

/// One run of the command line tool. JSON keys and command line flags share
/// the member's key name (given in the comments).
struct ExperimentConfig {
  std::string experiment = "example1";  // experiment: motivation|example1|example2|sweep|check|simulate
  std::string plant = "example1";       // plant: example1|example2 (check, simulate)
  std::string compensator = "saturated";  // compensator: saturated|min_norm (simulate)
  std::string certificate = "all";        // certificate: all|as_rcbf|as_zcbf|stoch_zcbf (check)

  double alpha = 1.0;          // alpha
  double beta = 1.0;           // beta
  double gamma = 1.0;          // gamma
  double c = 0.1;              // c
  double input_bound = 1.0;    // U_M
  double cap_start = 1e10;     // N
  double b = 0.0;              // b, 0 selects the derived rate
  std::vector<double> a_values{1.0, 0.5, 0.0};  // a_values
  double bs_saturation = 100.0;  // bs_saturation

  double x0 = 4.0;             // x0
  double pre_input = -1.0;     // u_o
  double dt = 1e-3;            // dt
  double horizon = 10.0;       // horizon
  std::size_t paths = 10;      // paths
  std::uint64_t seed = 0;      // seed
  std::size_t record_stride = 1;     // record_stride
  std::size_t trajectory_paths = 10;  // trajectory_paths
  std::size_t grid_points = 10000;    // grid_points
  unsigned workers = 1;        // workers (not echoed: outputs do not depend on it)

  std::filesystem::path out = "out";  // out (not echoed)

  void validate() const;
  SimConfig sim_config() const;
};

/// Defaults for the named experiment (matching the worked examples). For
/// check, simulate and sweep the plant parameters default to those of `plant`
/// (example1 when empty).
ExperimentConfig default_config(const std::string& experiment, const std::string& plant = "");

/// Overrides `cfg` with the keys present in `doc`. Unknown keys and values of
/// the wrong type raise ConfigError naming the key.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& doc);

/// Reads a config file: defaults of its "experiment" (or `fallback_experiment`)
/// and "plant" (or `plant_override`) overridden by the file's keys.
ExperimentConfig load_config(const std::filesystem::path& file, const std::string& fallback_experiment,
                             const std::string& plant_override = "");

nlohmann::json to_json(const ExperimentConfig& cfg);

/// A built-in plant with its barrier, compensators and certificate grids.
struct PlantSetup {
  std::string name;
  ControlAffineSDE sys;
  SafeSet safe;              // chi with the derived boundary layer mu
  ScalarField reciprocal;    // 1 / h on chi
  Compensator saturated;     // input-saturated compensator (phi_1 or phi_2)
  Compensator min_norm;      // unsaturated min-norm compensator (phi_N or phi_N2)
  double gamma = 0.0;
  double b = 0.0;
  nlohmann::json params;
  PointSet interior_grid;    // inside chi with h >= kBoundaryClip
  PointSet sublevel_grid;    // inside {h <= mu}
  double profile_lo = 0.0;   // state range of compensator_profile.csv
  double profile_hi = 1.0;
  double field_lo = 0.0;     // state range of field_profile.csv
  double field_hi = 1.0;
};

PlantSetup build_plant(const ExperimentConfig& cfg, const std::string& plant);

/// AS-RCBF and AS-ZCBF for the min-norm compensator on the interior grid,
/// stochastic ZCBF for the saturated compensator on the sublevel grid.
std::vector<CertificateReport> run_certificates(const PlantSetup& setup, const std::string& which);

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBlowup = 2;
inline constexpr int kExitInconsistent = 3;

struct RunResult {
  int exit_code = kExitOk;
  std::string summary;  // human readable, for stdout
};

RunResult run_motivation(const ExperimentConfig& cfg);
RunResult run_example(const ExperimentConfig& cfg);  // example1 or example2 by cfg.experiment
RunResult run_sweep(const ExperimentConfig& cfg);
RunResult run_check(const ExperimentConfig& cfg);
RunResult run_simulate(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace scbf
