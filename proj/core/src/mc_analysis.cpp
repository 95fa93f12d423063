#include "scbf/mc_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "scbf/binomial.hpp"
#include "scbf/certificates.hpp"
#include "scbf/errors.hpp"
#include "scbf/format.hpp"

namespace scbf {

nlohmann::json to_json(const SafetyVerdict& v) {
  return {{"empirical_exit_prob", v.empirical_exit_prob},
          {"ci", {v.ci_low, v.ci_high}},
          {"theoretical_exit_cap", v.theoretical_exit_cap},
          {"consistent", v.consistent},
          {"n_paths", v.n_paths},
          {"exits", v.exits},
          {"horizon", v.horizon},
          {"bound_kind", v.bound_kind}};
}

ExitCap stochastic_zcbf_cap(double b, double mu, double h0) {
  if (!(b > 0.0)) throw ParameterError("b must be positive");
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");
  if (h0 > mu) return {std::exp(-b * mu), "above_layer"};
  if (h0 > 0.0) return {std::exp(-b * h0), "inside_layer"};
  return {1.0, "outside_safe_set"};
}

ExitCap scaled_diffusion_cap(double b, double mu, double a) {
  return {1.0 - scaled_safety_bound(b, mu, a), "scaled_diffusion"};
}

SafetyVerdict estimate_exit_probability(const PathEnsemble& ensemble, double horizon,
                                        const ExitCap& cap) {
  if (ensemble.paths.empty()) throw ParameterError("empty ensemble");
  if (!(horizon >= 0.0) || horizon > ensemble.config.horizon + 0.5 * ensemble.config.dt) {
    throw ParameterError("horizon must lie within the simulated time span");
  }
  SafetyVerdict v;
  v.n_paths = ensemble.paths.size();
  for (const auto& p : ensemble.paths) {
    if (p.exit_time_chi && *p.exit_time_chi <= horizon) ++v.exits;
  }
  v.empirical_exit_prob = static_cast<double>(v.exits) / static_cast<double>(v.n_paths);
  const auto ci = clopper_pearson(v.exits, v.n_paths);
  v.ci_low = ci.low;
  v.ci_high = ci.high;
  v.theoretical_exit_cap = cap.cap;
  v.consistent = v.ci_low <= v.theoretical_exit_cap;
  v.horizon = horizon;
  v.bound_kind = cap.kind;
  return v;
}

MuZoneTrace mu_zone_trace(const PathEnsemble& ensemble, const ScalarField& h, double b, double mu) {
  if (ensemble.paths.empty()) throw ParameterError("empty ensemble");
  if (!(b > 0.0)) throw ParameterError("b must be positive");
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");

  MuZoneTrace tr;
  tr.mu_b = std::exp(-b * mu);
  tr.times = ensemble.times();
  const std::size_t records = tr.times.size();
  const auto n = static_cast<double>(ensemble.paths.size());
  tr.mean_decay.resize(records);
  tr.std_error.resize(records);
  tr.w_hat.resize(records);

  for (std::size_t k = 0; k < records; ++k) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& p : ensemble.paths) {
      const double v = std::exp(-b * h.value(p.states[k]));
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = n > 1.0 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    tr.mean_decay[k] = mean;
    tr.std_error[k] = std::sqrt(var / n);
    const double excess = std::max(0.0, mean - tr.mu_b);
    tr.w_hat[k] = excess * excess;
  }

  // Ordinary least squares of log(W_hat + floor) on t over the points above the floor.
  std::vector<double> ts;
  std::vector<double> ys;
  for (std::size_t k = 0; k < records; ++k) {
    if (tr.w_hat[k] > kTraceFloor) {
      ts.push_back(tr.times[k]);
      ys.push_back(std::log(tr.w_hat[k] + kTraceFloor));
    }
  }
  tr.fit_points = ts.size();
  if (ts.size() < 3) {
    // Too few points for a trend: W_hat has already reached the floor, or never left it.
    tr.decaying = tr.w_hat.back() <= tr.w_hat.front();
    return tr;
  }
  const auto m = static_cast<double>(ts.size());
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    y_mean += ys[i];
  }
  t_mean /= m;
  y_mean /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - t_mean) * (ts[i] - t_mean);
    sxy += (ts[i] - t_mean) * (ys[i] - y_mean);
  }
  tr.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - y_mean - tr.slope * (ts[i] - t_mean);
    rss += r * r;
  }
  tr.slope_se = std::sqrt(rss / (m - 2.0) / sxx);
  tr.decaying = tr.slope <= 3.0 * tr.slope_se;
  return tr;
}

void write_mu_zone_csv(std::ostream& out, const MuZoneTrace& tr) {
  out << "t,mean_B_b,std_error,W_hat,mu_b\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    out << format_number(tr.times[k]) << ',' << format_number(tr.mean_decay[k]) << ','
        << format_number(tr.std_error[k]) << ',' << format_number(tr.w_hat[k]) << ','
        << format_number(tr.mu_b) << '\n';
  }
}

std::vector<SweepRow> compare_bound_sweep(const ControlAffineSDE& nominal, const Compensator& phi,
                                          const SafeSet& safe, double b, const Vector& x0,
                                          const SimConfig& cfg, std::span<const double> a_values) {
  if (!safe.above_layer(x0)) throw ParameterError("sweep start must lie above the boundary layer");
  std::vector<SweepRow> rows;
  rows.reserve(a_values.size());
  for (const double a : a_values) {
    if (!(a >= 0.0 && a <= 1.0)) throw ParameterError("diffusion scale a must lie in [0, 1]");
    const MatrixMap sigma = nominal.diffusion_map();
    const auto scaled = nominal.with_diffusion([sigma, a](const Vector& x) -> Matrix {
      Matrix s = sigma(x);
      s *= a;
      return s;
    });
    const auto ens = simulate_ensemble(scaled, phi, x0, safe, cfg);
    const auto v = estimate_exit_probability(ens, cfg.horizon, scaled_diffusion_cap(b, safe.mu(), a));
    rows.push_back({a, v.theoretical_exit_cap, v.empirical_exit_prob, v.ci_low, v.ci_high,
                    v.consistent, v.exits, v.n_paths});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "a,cap,empirical,ci_low,ci_high,consistent\n";
  for (const auto& r : rows) {
    out << format_number(r.a) << ',' << format_number(r.cap) << ',' << format_number(r.empirical)
        << ',' << format_number(r.ci_low) << ',' << format_number(r.ci_high) << ','
        << (r.consistent ? "true" : "false") << '\n';
  }
}

}  // namespace scbf
