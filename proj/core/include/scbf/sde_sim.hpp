#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "scbf/barrier_calculus.hpp"
#include "scbf/compensator.hpp"
#include "scbf/safe_set.hpp"

namespace scbf {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 10.0;
  std::size_t n_paths = 10;
  std::uint64_t master_seed = 0;
  std::size_t record_stride = 1;
  // Worker threads for ensembles; 0 uses the hardware concurrency. Results do
  // not depend on this value.
  unsigned workers = 1;

  void validate() const;
  std::size_t steps() const;
};

nlohmann::json to_json(const SimConfig& cfg);

/// One simulated path recorded every `record_stride` steps. Exit times are
/// detected on every step and frozen at the first crossing; the path keeps
/// evolving afterwards.
struct SamplePath {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> inputs;      // phi(x) at the recorded steps
  std::vector<Vector> pre_inputs;  // u_o(x) at the recorded steps
  std::optional<double> exit_time_chi;     // first t with x(t) outside chi
  std::optional<double> exit_time_chi_mu;  // first t with x(t) outside chi_mu (0 if x0 is)
  std::uint64_t path_seed = 0;             // path index the noise stream was derived from
};

struct PathEnsemble {
  std::vector<SamplePath> paths;
  SimConfig config;
  std::vector<Vector> mean_trajectory;  // pointwise mean of states on the shared grid

  const std::vector<double>& times() const { return paths.front().times; }
};

/// x + (f(x) + g(x)(u_o(x) + phi(x))) dt + sigma(x) dW.
Vector euler_maruyama_step(const ControlAffineSDE& sys, const Compensator& phi, const Vector& x,
                           double dt, const Vector& dW);

/// Explicit Euler step of the noise-free plant.
Vector euler_step(const ControlAffineSDE& sys, const Compensator& phi, const Vector& x, double dt);

SamplePath simulate_path(const ControlAffineSDE& sys, const Compensator& phi, const Vector& x0,
                         const SafeSet& safe, const SimConfig& cfg, std::uint64_t path_index);

/// Paths 0..n_paths-1 with noise streams PathRng(master_seed, index); the
/// result is independent of the number of workers.
PathEnsemble simulate_ensemble(const ControlAffineSDE& sys, const Compensator& phi,
                               const Vector& x0, const SafeSet& safe, const SimConfig& cfg);

/// Rows `path_id,t,x_1..x_n,u,u_o,h,exited_chi` for the first `max_paths`
/// paths (u and u_o become u_1.., u_o_1.. when m > 1).
void write_trajectories_csv(std::ostream& out, const PathEnsemble& ensemble, const ScalarField& h,
                            std::size_t max_paths);

/// Rows `t,x_1..x_n,h` of the mean trajectory.
void write_mean_trajectory_csv(std::ostream& out, const PathEnsemble& ensemble,
                               const ScalarField& h);

/// {n_paths, exit_fraction_chi, exit_fraction_chi_mu, ci_low, ci_high, config};
/// the interval is the 99% exact binomial interval of exit_fraction_chi.
nlohmann::json ensemble_summary(const PathEnsemble& ensemble);

}  // namespace scbf
