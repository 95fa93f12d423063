#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scbf/sde_sim.hpp"

namespace scbf {

/// Empirical exit probability over [0, horizon] against a theoretical cap.
struct SafetyVerdict {
  double empirical_exit_prob = 0.0;
  double ci_low = 0.0;   // 99% exact binomial interval
  double ci_high = 1.0;
  double theoretical_exit_cap = 1.0;
  bool consistent = true;  // ci_low <= theoretical_exit_cap
  std::size_t exits = 0;
  std::size_t n_paths = 0;
  double horizon = 0.0;
  std::string bound_kind;

  double half_width() const { return 0.5 * (ci_high - ci_low); }
  /// empirical <= cap + half_width, the one-sided acceptance form.
  bool within_cap() const { return empirical_exit_prob <= theoretical_exit_cap + half_width(); }
};

nlohmann::json to_json(const SafetyVerdict& verdict);

struct ExitCap {
  double cap = 1.0;
  std::string kind;
};

/// Exit-probability cap from a stochastic ZCBF with rate b and layer mu:
/// exp(-b mu) above the layer, exp(-b h0) inside it and 1 outside chi.
ExitCap stochastic_zcbf_cap(double b, double mu, double h0);

/// exp(-b mu / a^2) for the sigma' = a sigma system (0 at a = 0).
ExitCap scaled_diffusion_cap(double b, double mu, double a);

/// Fraction of paths whose exit_time_chi is <= horizon.
SafetyVerdict estimate_exit_probability(const PathEnsemble& ensemble, double horizon,
                                        const ExitCap& cap);

// Floor added before taking logs of W_hat.
inline constexpr double kTraceFloor = 1e-12;

/// Ensemble estimate of W(t) = ([E B_b(x(t)) - mu_b]_+)^2 with mu_b = exp(-b mu).
struct MuZoneTrace {
  std::vector<double> times;
  std::vector<double> mean_decay;  // ensemble mean of B_b = exp(-b h)
  std::vector<double> std_error;   // its standard error
  std::vector<double> w_hat;
  double mu_b = 0.0;
  double slope = 0.0;     // least-squares slope of log(W_hat + floor) where W_hat > floor
  double slope_se = 0.0;
  std::size_t fit_points = 0;
  bool decaying = false;  // slope <= 3 slope_se
};

MuZoneTrace mu_zone_trace(const PathEnsemble& ensemble, const ScalarField& h, double b, double mu);

void write_mu_zone_csv(std::ostream& out, const MuZoneTrace& trace);

struct SweepRow {
  double a = 1.0;
  double cap = 1.0;
  double empirical = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  bool consistent = true;
  std::size_t exits = 0;
  std::size_t n_paths = 0;
};

/// Runs the sigma' = a sigma plant under the unchanged compensator for each a
/// in [0, 1] and compares exits against exp(-b mu / a^2). x0 must lie above the layer.
std::vector<SweepRow> compare_bound_sweep(const ControlAffineSDE& nominal, const Compensator& phi,
                                          const SafeSet& safe, double b, const Vector& x0,
                                          const SimConfig& cfg, std::span<const double> a_values);

/// Columns `a,cap,empirical,ci_low,ci_high,consistent`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace scbf
