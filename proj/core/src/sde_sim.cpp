#include "scbf/sde_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include "scbf/binomial.hpp"
#include "scbf/errors.hpp"
#include "scbf/format.hpp"
#include "scbf/rng.hpp"

namespace scbf {

namespace {

std::string describe(const Vector& x) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(x(i));
  }
  return out + "]";
}

// One step that also hands back the inputs it used, for recording.
Vector advance(const ControlAffineSDE& sys, const Compensator& phi, const Vector& x, double dt,
               const Vector* dW, Vector& u, Vector& uo) {
  try {
    u = phi(x);
    sys.check_input(u);
    uo = sys.pre_input(x);
    if (!u.allFinite()) throw NumericalBlowup("non-finite compensator output at x = " + describe(x));
    Vector next = x + (sys.drift(x) + sys.input_gain(x) * (uo + u)) * dt;
    if (dW != nullptr) next += sys.diffusion(x) * (*dW);
    if (!next.allFinite()) throw NumericalBlowup("non-finite state after step from x = " + describe(x));
    return next;
  } catch (const DomainError& e) {
    throw NumericalBlowup(std::string("compensator left its domain at x = ") + describe(x) + ": " +
                          e.what());
  } catch (const SingularityError& e) {
    throw NumericalBlowup(std::string("singular compensator at x = ") + describe(x) + ": " +
                          e.what());
  }
}

double field_or_nan(const ScalarField& h, const Vector& x) {
  return h.in_domain(x) ? h.value(x) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void SimConfig::validate() const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ParameterError("dt must be positive");
  if (!(std::isfinite(horizon) && horizon >= dt)) throw ParameterError("horizon must be >= dt");
  if (n_paths < 1) throw ParameterError("n_paths must be >= 1");
  if (record_stride < 1) throw ParameterError("record_stride must be >= 1");
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

nlohmann::json to_json(const SimConfig& cfg) {
  return {{"dt", cfg.dt},
          {"horizon", cfg.horizon},
          {"n_paths", cfg.n_paths},
          {"master_seed", cfg.master_seed},
          {"record_stride", cfg.record_stride}};
}

Vector euler_maruyama_step(const ControlAffineSDE& sys, const Compensator& phi, const Vector& x,
                           double dt, const Vector& dW) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (dW.size() != sys.noise_dim()) throw DimensionError("dW has the wrong length");
  sys.check_state(x);
  Vector u;
  Vector uo;
  return advance(sys, phi, x, dt, &dW, u, uo);
}

Vector euler_step(const ControlAffineSDE& sys, const Compensator& phi, const Vector& x, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  sys.check_state(x);
  Vector u;
  Vector uo;
  return advance(sys, phi, x, dt, nullptr, u, uo);
}

SamplePath simulate_path(const ControlAffineSDE& sys, const Compensator& phi, const Vector& x0,
                         const SafeSet& safe, const SimConfig& cfg, std::uint64_t path_index) {
  cfg.validate();
  sys.check_state(x0);
  if (!x0.allFinite()) throw ParameterError("initial state must be finite");

  const std::size_t steps = cfg.steps();
  const std::size_t records = steps / cfg.record_stride + 1;
  const double sqrt_dt = std::sqrt(cfg.dt);
  const int d = sys.noise_dim();

  SamplePath path;
  path.path_seed = path_index;
  path.times.reserve(records);
  path.states.reserve(records);
  path.inputs.reserve(records);
  path.pre_inputs.reserve(records);

  PathRng rng(cfg.master_seed, path_index);
  const ScalarField& h = safe.field();
  Vector x = x0;
  Vector dW(d);
  Vector u;
  Vector uo;

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    double hx;
    try {
      hx = h.value(x);
    } catch (const DomainError&) {
      throw NumericalBlowup("state left the barrier domain at x = " + describe(x));
    }
    if (!path.exit_time_chi && !safe.safe_level(hx)) path.exit_time_chi = t;
    if (!path.exit_time_chi_mu && !safe.layer_level(hx)) path.exit_time_chi_mu = t;
    if (k == steps) {
      if (k % cfg.record_stride == 0) {
        u = phi(x);
        uo = sys.pre_input(x);
        path.times.push_back(t);
        path.states.push_back(x);
        path.inputs.push_back(u);
        path.pre_inputs.push_back(uo);
      }
      break;
    }
    for (int j = 0; j < d; ++j) dW(j) = sqrt_dt * rng.normal();
    Vector next = advance(sys, phi, x, cfg.dt, &dW, u, uo);
    if (k % cfg.record_stride == 0) {
      path.times.push_back(t);
      path.states.push_back(x);
      path.inputs.push_back(u);
      path.pre_inputs.push_back(uo);
    }
    x = next;
  }
  return path;
}

PathEnsemble simulate_ensemble(const ControlAffineSDE& sys, const Compensator& phi,
                               const Vector& x0, const SafeSet& safe, const SimConfig& cfg) {
  cfg.validate();
  PathEnsemble ens;
  ens.config = cfg;
  ens.paths.resize(cfg.n_paths);
  std::vector<std::exception_ptr> errors(cfg.n_paths);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < cfg.n_paths; i = next.fetch_add(1)) {
      try {
        ens.paths[i] = simulate_path(sys, phi, x0, safe, cfg, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.n_paths));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const NumericalBlowup& e) {
      throw NumericalBlowup("path " + std::to_string(i) + ": " + e.what());
    }
  }

  const std::size_t records = ens.paths.front().states.size();
  ens.mean_trajectory.assign(records, Vector::Zero(sys.state_dim()));
  for (const auto& p : ens.paths) {
    for (std::size_t k = 0; k < records; ++k) ens.mean_trajectory[k] += p.states[k];
  }
  const double inv = 1.0 / static_cast<double>(ens.paths.size());
  for (auto& m : ens.mean_trajectory) m *= inv;
  return ens;
}

void write_trajectories_csv(std::ostream& out, const PathEnsemble& ensemble, const ScalarField& h,
                            std::size_t max_paths) {
  if (ensemble.paths.empty()) throw ParameterError("empty ensemble");
  const auto& first = ensemble.paths.front();
  const Eigen::Index n = first.states.front().size();
  const Eigen::Index m = first.inputs.front().size();

  out << "path_id,t";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i + 1;
  if (m == 1) {
    out << ",u,u_o";
  } else {
    for (Eigen::Index i = 0; i < m; ++i) out << ",u_" << i + 1;
    for (Eigen::Index i = 0; i < m; ++i) out << ",u_o_" << i + 1;
  }
  out << ",h,exited_chi\n";

  const std::size_t count = std::min(max_paths, ensemble.paths.size());
  for (std::size_t p = 0; p < count; ++p) {
    const auto& path = ensemble.paths[p];
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      const double t = path.times[k];
      out << p << ',' << format_number(t);
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(path.states[k](i));
      for (Eigen::Index i = 0; i < m; ++i) out << ',' << format_number(path.inputs[k](i));
      for (Eigen::Index i = 0; i < m; ++i) out << ',' << format_number(path.pre_inputs[k](i));
      const bool exited = path.exit_time_chi && *path.exit_time_chi <= t;
      out << ',' << format_number(field_or_nan(h, path.states[k])) << ',' << (exited ? 1 : 0)
          << '\n';
    }
  }
}

void write_mean_trajectory_csv(std::ostream& out, const PathEnsemble& ensemble,
                               const ScalarField& h) {
  if (ensemble.paths.empty()) throw ParameterError("empty ensemble");
  const Eigen::Index n = ensemble.mean_trajectory.front().size();
  out << 't';
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i + 1;
  out << ",h\n";
  const auto& times = ensemble.times();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Vector& x = ensemble.mean_trajectory[k];
    out << format_number(times[k]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(x(i));
    out << ',' << format_number(field_or_nan(h, x)) << '\n';
  }
}

nlohmann::json ensemble_summary(const PathEnsemble& ensemble) {
  if (ensemble.paths.empty()) throw ParameterError("empty ensemble");
  std::size_t exits = 0;
  std::size_t exits_mu = 0;
  for (const auto& p : ensemble.paths) {
    exits += p.exit_time_chi ? 1 : 0;
    exits_mu += p.exit_time_chi_mu ? 1 : 0;
  }
  const std::size_t n = ensemble.paths.size();
  const auto ci = clopper_pearson(exits, n);
  return {{"n_paths", n},
          {"exit_fraction_chi", static_cast<double>(exits) / static_cast<double>(n)},
          {"exit_fraction_chi_mu", static_cast<double>(exits_mu) / static_cast<double>(n)},
          {"ci_low", ci.low},
          {"ci_high", ci.high},
          {"config", to_json(ensemble.config)}};
}

}  // namespace scbf
