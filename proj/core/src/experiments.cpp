#include "scbf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <utility>

#include "scbf/errors.hpp"
#include "scbf/format.hpp"
#include "scbf/mc_analysis.hpp"

namespace scbf {

namespace {

using Files = std::map<std::string, std::string>;

const std::vector<std::string> kExperiments{"motivation", "example1", "example2",
                                            "sweep",      "check",    "simulate"};

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (v == o) return true;
  }
  return false;
}

double number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key + ": expected a number");
  return v.get<double>();
}

std::uint64_t count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(key + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + ": expected a string");
  return v.get<std::string>();
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void write_files(const std::filesystem::path& dir, const Files& files) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, body] : files) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("out: cannot write " + (dir / name).string());
    f << body;
  }
}

// Pads the positive and negative offsets from `edge` into chi.
PointSet edge_points(double edge, double direction, double max_offset, std::size_t n) {
  return geometric_points(edge, direction, 1e-9, max_offset, n);
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

std::string profile_csv(const PlantSetup& setup, const Compensator& saturated,
                        const Compensator& min_norm, std::size_t n) {
  std::ostringstream os;
  os << "x,phi,phi_min_norm,u_o\n";
  for (const Vector& x : linspace_points(setup.profile_lo, setup.profile_hi, n)) {
    double unsat = std::nan("");
    try {
      unsat = min_norm(x)(0);
    } catch (const DomainError&) {
    }
    os << format_number(x(0)) << ',' << format_number(saturated(x)(0)) << ','
       << format_number(unsat) << ",0\n";
  }
  return os.str();
}

std::string field_csv(const PlantSetup& setup, std::size_t n) {
  std::ostringstream os;
  os << "x,h,B\n";
  const ScalarField& h = setup.safe.field();
  for (const Vector& x : linspace_points(setup.field_lo, setup.field_hi, n)) {
    const double B = setup.reciprocal.in_domain(x) ? setup.reciprocal.value(x) : std::nan("");
    os << format_number(x(0)) << ',' << format_number(h.value(x)) << ',' << format_number(B)
       << '\n';
  }
  return os.str();
}

PathEnsemble single_path_ensemble(SamplePath path, const SimConfig& cfg) {
  PathEnsemble ens;
  ens.config = cfg;
  ens.config.n_paths = 1;
  ens.mean_trajectory = path.states;
  ens.paths.push_back(std::move(path));
  return ens;
}

nlohmann::json certificates_json(const std::vector<CertificateReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

bool all_passed(const std::vector<CertificateReport>& reports) {
  for (const auto& r : reports) {
    if (!r.passed) return false;
  }
  return true;
}

std::string verdict_line(const SafetyVerdict& v) {
  std::ostringstream os;
  os << "exit fraction " << format_number(v.empirical_exit_prob) << " (" << v.exits << "/"
     << v.n_paths << "), 99% CI [" << format_number(v.ci_low) << ", " << format_number(v.ci_high)
     << "], cap " << format_number(v.theoretical_exit_cap) << (v.within_cap() ? "" : "  EXCEEDED");
  return os.str();
}

PlantSetup half_line_plant(const ExperimentConfig& cfg) {
  const HalfLineParams p =
      derive_half_line_params(cfg.alpha, cfg.gamma, cfg.c, cfg.input_bound, cfg.cap_start);
  const VectorMap uo = constant_pre_input(cfg.pre_input);
  auto sys = single_integrator(cfg.c, uo);
  BarrierPair fields = half_line_fields(p);
  const double b = cfg.b > 0.0 ? cfg.b : p.b;
  SafeSet safe(fields.h, p.mu);

  const std::size_t half = std::max<std::size_t>(cfg.grid_points / 2, 1);
  const double span = std::min(50.0, 0.5 * (p.cap_start - p.alpha));
  PointSet interior = filter_points(
      concat_points({geometric_points(p.alpha, 1.0, kBoundaryClip, span, half),
                     linspace_points(p.alpha + kBoundaryClip, p.alpha + span, cfg.grid_points - half)}),
      [&](const Vector& x) { return fields.h.value(x) >= kBoundaryClip; });
  PointSet sublevel = filter_points(
      concat_points({linspace_points(p.alpha - 5.0, p.x_mu, half),
                     edge_points(p.x_mu, -1.0, 5.0, cfg.grid_points - half)}),
      [&](const Vector& x) { return safe.in_sublevel(x); });

  nlohmann::json params{{"plant", "example1"},
                        {"alpha", p.alpha},
                        {"gamma", p.gamma},
                        {"c", p.c},
                        {"U_M", p.input_bound},
                        {"N", p.cap_start},
                        {"mu", p.mu},
                        {"x_mu", p.x_mu},
                        {"b", p.b},
                        {"D", p.saturation},
                        {"x_D", p.x_saturation},
                        {"safety_bound", safety_probability_bound(p.b, p.mu)},
                        {"exit_cap", std::exp(-p.b * p.mu)}};
  if (cfg.b > 0.0) params["b_override"] = cfg.b;

  Compensator saturated = half_line_compensator(p, uo);
  Compensator min_norm = min_norm_compensator(sys, fields.h, p.gamma);
  return PlantSetup{"example1",
                    std::move(sys),
                    std::move(safe),
                    std::move(fields.B),
                    std::move(saturated),
                    std::move(min_norm),
                    p.gamma,
                    b,
                    std::move(params),
                    std::move(interior),
                    std::move(sublevel),
                    p.alpha - 0.5,
                    p.alpha + 3.0,
                    p.alpha + 1e-4,
                    p.alpha + 8.0};
}

PlantSetup interval_plant(const ExperimentConfig& cfg) {
  const IntervalParams p = derive_interval_params(cfg.alpha, cfg.beta, cfg.c, cfg.input_bound);
  const VectorMap uo = constant_pre_input(cfg.pre_input);
  auto sys = single_integrator(cfg.c, uo);
  BarrierPair fields = interval_fields(p);
  const double b = cfg.b > 0.0 ? cfg.b : p.b;
  SafeSet safe(fields.h, p.mu);

  const double lo = p.alpha - p.beta;
  const double hi = p.alpha + p.beta;
  const std::size_t quarter = std::max<std::size_t>(cfg.grid_points / 4, 1);
  const std::size_t rest = cfg.grid_points > 3 * quarter ? cfg.grid_points - 3 * quarter : 1;
  const auto& h = fields.h;
  PointSet interior = filter_points(
      concat_points({geometric_points(lo, 1.0, kBoundaryClip, p.beta, quarter),
                     geometric_points(hi, -1.0, kBoundaryClip, p.beta, quarter),
                     linspace_points(lo, hi, 2 * quarter)}),
      [&](const Vector& x) { return h.value(x) >= kBoundaryClip; });
  PointSet sublevel = filter_points(
      concat_points({linspace_points(lo - 1.0, p.x_mu_left, quarter),
                     edge_points(p.x_mu_left, -1.0, 1.0, quarter),
                     linspace_points(p.x_mu_right, hi + 1.0, quarter),
                     edge_points(p.x_mu_right, 1.0, 1.0, rest)}),
      [&](const Vector& x) { return safe.in_sublevel(x); });

  nlohmann::json params{{"plant", "example2"},
                        {"alpha", p.alpha},
                        {"beta", p.beta},
                        {"c", p.c},
                        {"U_M", p.input_bound},
                        {"gamma", p.gamma},
                        {"theta_mu", p.theta_mu},
                        {"tan_theta_mu", p.tan_theta_mu},
                        {"mu", p.mu},
                        {"x_mu_left", p.x_mu_left},
                        {"x_mu_right", p.x_mu_right},
                        {"b", p.b},
                        {"b_closed_form", p.b_closed_form},
                        {"safety_bound", safety_probability_bound(p.b, p.mu)},
                        {"exit_cap", std::exp(-p.b * p.mu)}};
  if (cfg.b > 0.0) params["b_override"] = cfg.b;

  IntervalCompensators comps = interval_compensators(p, uo);
  return PlantSetup{"example2",
                    std::move(sys),
                    std::move(safe),
                    std::move(fields.B),
                    std::move(comps.saturated),
                    std::move(comps.min_norm),
                    p.gamma,
                    b,
                    std::move(params),
                    std::move(interior),
                    std::move(sublevel),
                    lo - 0.2,
                    hi + 0.2,
                    lo,
                    hi};
}

// Compensators of the plant rebuilt with u_o = 0, for the profile files.
std::pair<Compensator, Compensator> unforced_compensators(const ExperimentConfig& cfg,
                                                          const std::string& plant) {
  ExperimentConfig zero = cfg;
  zero.pre_input = 0.0;
  PlantSetup s = build_plant(zero, plant);
  return {std::move(s.saturated), std::move(s.min_norm)};
}

Vector start_state(const ExperimentConfig& cfg) { return scalar_vector(cfg.x0); }

}  // namespace

void ExperimentConfig::validate() const {
  bool known = false;
  for (const auto& e : kExperiments) known = known || e == experiment;
  if (!known) throw ConfigError("experiment: unknown experiment '" + experiment + "'");
  if (!one_of(plant, {"example1", "example2"})) throw ConfigError("plant: unknown plant '" + plant + "'");
  if (!one_of(compensator, {"saturated", "min_norm"})) {
    throw ConfigError("compensator: expected saturated or min_norm");
  }
  if (!one_of(certificate, {"all", "as_rcbf", "as_zcbf", "stoch_zcbf"})) {
    throw ConfigError("certificate: expected all, as_rcbf, as_zcbf or stoch_zcbf");
  }
  const std::pair<const char*, double> finite[] = {
      {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"c", c}, {"U_M", input_bound},
      {"N", cap_start}, {"b", b}, {"x0", x0}, {"u_o", pre_input}, {"bs_saturation", bs_saturation}};
  for (const auto& [key, v] : finite) {
    if (!std::isfinite(v)) throw ConfigError(std::string(key) + ": must be finite");
  }
  if (b < 0.0) throw ConfigError("b: must be >= 0 (0 selects the derived rate)");
  if (!(dt > 0.0 && std::isfinite(dt))) throw ConfigError("dt: must be positive");
  if (!(horizon >= dt && std::isfinite(horizon))) throw ConfigError("horizon: must be >= dt");
  if (paths < 1) throw ConfigError("paths: must be >= 1");
  if (record_stride < 1) throw ConfigError("record_stride: must be >= 1");
  if (grid_points < 4) throw ConfigError("grid_points: must be >= 4");
  if (!(bs_saturation > 0.0)) throw ConfigError("bs_saturation: must be positive");
  for (double a : a_values) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("a_values: every a must lie in [0, 1]");
  }
}

SimConfig ExperimentConfig::sim_config() const {
  SimConfig s;
  s.dt = dt;
  s.horizon = horizon;
  s.n_paths = paths;
  s.master_seed = seed;
  s.record_stride = record_stride;
  s.workers = workers;
  return s;
}

ExperimentConfig default_config(const std::string& experiment, const std::string& plant) {
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end()) {
    throw ConfigError("experiment: unknown experiment '" + experiment + "'");
  }
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  std::string base = plant.empty() ? "example1" : plant;
  if (experiment == "example1" || experiment == "example2") base = experiment;
  if (!one_of(base, {"example1", "example2"})) throw ConfigError("plant: unknown plant '" + base + "'");
  cfg.plant = base;
  if (experiment == "motivation") {
    cfg.x0 = 1.0;
    cfg.dt = 1e-4;
    cfg.horizon = 1.0;
  } else if (base == "example2") {
    cfg.alpha = 0.0;
    cfg.beta = 1.0;
    cfg.c = 0.01;
    cfg.input_bound = 1.0;
    cfg.x0 = 0.99;
    cfg.pre_input = 1.0;
    cfg.dt = 1e-4;
    cfg.horizon = 10.0;
  }
  return cfg;
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  using Setter = std::function<void(const nlohmann::json&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"experiment", [&](auto& v, auto& k) { cfg.experiment = text(v, k); }},
      {"plant", [&](auto& v, auto& k) { cfg.plant = text(v, k); }},
      {"compensator", [&](auto& v, auto& k) { cfg.compensator = text(v, k); }},
      {"certificate", [&](auto& v, auto& k) { cfg.certificate = text(v, k); }},
      {"alpha", [&](auto& v, auto& k) { cfg.alpha = number(v, k); }},
      {"beta", [&](auto& v, auto& k) { cfg.beta = number(v, k); }},
      {"gamma", [&](auto& v, auto& k) { cfg.gamma = number(v, k); }},
      {"c", [&](auto& v, auto& k) { cfg.c = number(v, k); }},
      {"U_M", [&](auto& v, auto& k) { cfg.input_bound = number(v, k); }},
      {"N", [&](auto& v, auto& k) { cfg.cap_start = number(v, k); }},
      {"b", [&](auto& v, auto& k) { cfg.b = number(v, k); }},
      {"a_values",
       [&](auto& v, auto& k) {
         if (!v.is_array()) throw ConfigError(k + ": expected an array of numbers");
         cfg.a_values.clear();
         for (const auto& a : v) cfg.a_values.push_back(number(a, k));
       }},
      {"bs_saturation", [&](auto& v, auto& k) { cfg.bs_saturation = number(v, k); }},
      {"x0", [&](auto& v, auto& k) { cfg.x0 = number(v, k); }},
      {"u_o", [&](auto& v, auto& k) { cfg.pre_input = number(v, k); }},
      {"dt", [&](auto& v, auto& k) { cfg.dt = number(v, k); }},
      {"horizon", [&](auto& v, auto& k) { cfg.horizon = number(v, k); }},
      {"paths", [&](auto& v, auto& k) { cfg.paths = count(v, k); }},
      {"seed", [&](auto& v, auto& k) { cfg.seed = count(v, k); }},
      {"record_stride", [&](auto& v, auto& k) { cfg.record_stride = count(v, k); }},
      {"trajectory_paths", [&](auto& v, auto& k) { cfg.trajectory_paths = count(v, k); }},
      {"grid_points", [&](auto& v, auto& k) { cfg.grid_points = count(v, k); }},
      {"workers", [&](auto& v, auto& k) { cfg.workers = static_cast<unsigned>(count(v, k)); }},
      {"out", [&](auto& v, auto& k) { cfg.out = text(v, k); }},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key + ": unknown config key");
    it->second(value, key);
  }
}

ExperimentConfig load_config(const std::filesystem::path& file,
                             const std::string& fallback_experiment,
                             const std::string& plant_override) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  std::string experiment = fallback_experiment;
  std::string plant;
  if (doc.is_object() && doc.contains("experiment")) experiment = text(doc["experiment"], "experiment");
  if (doc.is_object() && doc.contains("plant")) plant = text(doc["plant"], "plant");
  if (!plant_override.empty()) plant = plant_override;
  ExperimentConfig cfg = default_config(experiment, plant);
  apply_json(cfg, doc);
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"experiment", cfg.experiment},
          {"plant", cfg.plant},
          {"compensator", cfg.compensator},
          {"certificate", cfg.certificate},
          {"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"gamma", cfg.gamma},
          {"c", cfg.c},
          {"U_M", cfg.input_bound},
          {"N", cfg.cap_start},
          {"b", cfg.b},
          {"a_values", cfg.a_values},
          {"bs_saturation", cfg.bs_saturation},
          {"x0", cfg.x0},
          {"u_o", cfg.pre_input},
          {"dt", cfg.dt},
          {"horizon", cfg.horizon},
          {"paths", cfg.paths},
          {"seed", cfg.seed},
          {"record_stride", cfg.record_stride},
          {"trajectory_paths", cfg.trajectory_paths},
          {"grid_points", cfg.grid_points}};
}

PlantSetup build_plant(const ExperimentConfig& cfg, const std::string& plant) {
  if (plant == "example1") return half_line_plant(cfg);
  if (plant == "example2") return interval_plant(cfg);
  throw ConfigError("plant: unknown plant '" + plant + "'");
}

std::vector<CertificateReport> run_certificates(const PlantSetup& s, const std::string& which) {
  std::vector<CertificateReport> out;
  if (which == "all" || which == "as_rcbf") {
    out.push_back(check_as_rcbf(s.sys, s.min_norm, s.reciprocal, s.gamma, s.interior_grid));
  }
  if (which == "all" || which == "as_zcbf") {
    out.push_back(check_as_zcbf(s.sys, s.min_norm, s.safe.field(), s.gamma, s.interior_grid));
  }
  if (which == "all" || which == "stoch_zcbf") {
    out.push_back(check_stochastic_zcbf(s.sys, s.saturated, s.safe, s.b, s.sublevel_grid));
  }
  if (out.empty()) throw ConfigError("certificate: unknown certificate '" + which + "'");
  return out;
}

RunResult run_motivation(const ExperimentConfig& cfg) {
  cfg.validate();
  const VectorMap uo = constant_pre_input(cfg.pre_input);
  const auto sys = single_integrator(cfg.c, uo);
  const BarrierPair fields = motivating_fields(cfg.alpha);
  const SafeSet safe(fields.h, 0.0, BoundaryPolicy::closed);
  const MotivatingCompensators comps = motivating_compensators(cfg.alpha, cfg.gamma, cfg.c, uo);
  const HalfLineParams bs = derive_half_line_params(cfg.alpha, cfg.gamma, cfg.c, cfg.bs_saturation,
                                                    cfg.cap_start);
  const Compensator reciprocal = half_line_compensator(bs, uo);
  const SimConfig sim = cfg.sim_config();
  const Vector x0 = start_state(cfg);

  const PathEnsemble ens_hs = simulate_ensemble(sys, comps.zeroing, x0, safe, sim);
  const PathEnsemble ens_bs = simulate_ensemble(sys, reciprocal, x0, safe, sim);
  const ExitCap no_cap{1.0, "none"};
  const SafetyVerdict v_hs = estimate_exit_probability(ens_hs, cfg.horizon, no_cap);
  const SafetyVerdict v_bs = estimate_exit_probability(ens_bs, cfg.horizon, no_cap);
  const bool ordered = v_bs.empirical_exit_prob < v_hs.empirical_exit_prob;

  nlohmann::json comparison{{"zeroing", to_json(v_hs)},
                            {"reciprocal", to_json(v_bs)},
                            {"reciprocal_saturation", cfg.bs_saturation},
                            {"ordering_holds", ordered},
                            {"config", to_json(cfg)}};
  Files files;
  files["comparison.json"] = dump(comparison);
  files["trajectories_hs.csv"] = render(
      [&](std::ostream& os) { write_trajectories_csv(os, ens_hs, fields.h, cfg.trajectory_paths); });
  files["trajectories_bs.csv"] = render(
      [&](std::ostream& os) { write_trajectories_csv(os, ens_bs, fields.h, cfg.trajectory_paths); });
  write_files(cfg.out, files);

  std::ostringstream os;
  os << "motivation: zeroing compensator " << verdict_line(v_hs) << "\n"
     << "motivation: saturated reciprocal compensator " << verdict_line(v_bs) << "\n"
     << "ordering (reciprocal < zeroing): " << (ordered ? "holds" : "does not hold") << "\n";
  return {kExitOk, os.str()};
}

RunResult run_example(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!one_of(cfg.experiment, {"example1", "example2"})) {
    throw ConfigError("experiment: run_example needs example1 or example2");
  }
  const PlantSetup s = build_plant(cfg, cfg.experiment);
  const auto certs = run_certificates(s, "all");
  const SimConfig sim = cfg.sim_config();
  const Vector x0 = start_state(cfg);
  const ScalarField& h = s.safe.field();
  const double mu = s.safe.mu();

  const PathEnsemble ens = simulate_ensemble(s.sys, s.saturated, x0, s.safe, sim);
  const auto noiseless = s.sys.with_diffusion([](const Vector&) { return scalar_matrix(0.0); });
  const PathEnsemble det =
      single_path_ensemble(simulate_path(noiseless, s.saturated, x0, s.safe, sim, 0), sim);
  const SafetyVerdict verdict =
      estimate_exit_probability(ens, cfg.horizon, stochastic_zcbf_cap(s.b, mu, h.value(x0)));
  const MuZoneTrace trace = mu_zone_trace(ens, h, s.b, mu);
  const auto [phi0, phi0_min_norm] = unforced_compensators(cfg, cfg.experiment);

  nlohmann::json params = s.params;
  params["config"] = to_json(cfg);
  nlohmann::json verdict_doc = to_json(verdict);
  verdict_doc["ensemble"] = ensemble_summary(ens);
  verdict_doc["mu_zone_decaying"] = trace.decaying;
  verdict_doc["note"] = "finite horizon, exits detected on the time grid only";

  Files files;
  files["params.json"] = dump(params);
  files["certificates.json"] = dump(certificates_json(certs));
  files["verdict.json"] = dump(verdict_doc);
  files["trajectories.csv"] = render(
      [&](std::ostream& os) { write_trajectories_csv(os, ens, h, cfg.trajectory_paths); });
  files["mean_trajectory.csv"] = render([&](std::ostream& os) { write_mean_trajectory_csv(os, ens, h); });
  files["deterministic.csv"] = render([&](std::ostream& os) { write_trajectories_csv(os, det, h, 1); });
  files["mu_zone.csv"] = render([&](std::ostream& os) { write_mu_zone_csv(os, trace); });
  files["compensator_profile.csv"] = profile_csv(s, phi0, phi0_min_norm, 2001);
  files["field_profile.csv"] = field_csv(s, 2001);
  write_files(cfg.out, files);

  std::ostringstream os;
  os << cfg.experiment << ": mu = " << format_number(mu) << ", b = " << format_number(s.b)
     << ", safety bound = " << format_number(safety_probability_bound(s.b, mu)) << "\n";
  for (const auto& r : certs) {
    os << "  " << to_string(r.kind) << (r.passed ? " passed" : " FAILED") << ", worst margin "
       << format_number(r.worst_margin) << "\n";
  }
  os << "  " << verdict_line(verdict) << "\n";
  const bool ok = verdict.within_cap();
  return {ok ? kExitOk : kExitInconsistent, os.str()};
}

RunResult run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const PlantSetup s = build_plant(cfg, cfg.plant);
  const SimConfig sim = cfg.sim_config();
  const auto rows = compare_bound_sweep(s.sys, s.saturated, s.safe, s.b, start_state(cfg), sim,
                                        cfg.a_values);
  nlohmann::json doc{{"params", s.params}, {"config", to_json(cfg)}, {"rows", nlohmann::json::array()}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : rows) {
    const double half = 0.5 * (r.ci_high - r.ci_low);
    const bool within = r.empirical <= r.cap + half;
    ok = ok && within;
    doc["rows"].push_back({{"a", r.a},
                           {"cap", r.cap},
                           {"empirical", r.empirical},
                           {"ci", {r.ci_low, r.ci_high}},
                           {"consistent", r.consistent},
                           {"exits", r.exits},
                           {"n_paths", r.n_paths}});
    os << "a = " << format_number(r.a) << ": exits " << r.exits << "/" << r.n_paths << ", cap "
       << format_number(r.cap) << (within ? "" : "  EXCEEDED") << "\n";
  }
  Files files;
  files["sweep.csv"] = render([&](std::ostream& o) { write_sweep_csv(o, rows); });
  files["sweep.json"] = dump(doc);
  write_files(cfg.out, files);
  return {ok ? kExitOk : kExitInconsistent, os.str()};
}

RunResult run_check(const ExperimentConfig& cfg) {
  cfg.validate();
  const PlantSetup s = build_plant(cfg, cfg.plant);
  const auto certs = run_certificates(s, cfg.certificate);
  nlohmann::json doc{{"params", s.params}, {"certificates", certificates_json(certs)}};
  write_files(cfg.out, {{"certificates.json", dump(doc)}});
  std::ostringstream os;
  for (const auto& r : certs) {
    os << cfg.plant << " " << to_string(r.kind) << (r.passed ? " passed" : " FAILED")
       << ", worst margin " << format_number(r.worst_margin) << " at x = "
       << format_number(r.worst_point(0)) << "\n";
  }
  return {all_passed(certs) ? kExitOk : kExitInconsistent, os.str()};
}

RunResult run_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const PlantSetup s = build_plant(cfg, cfg.plant);
  const Compensator& phi = cfg.compensator == "min_norm" ? s.min_norm : s.saturated;
  const Vector x0 = start_state(cfg);
  const ScalarField& h = s.safe.field();
  const PathEnsemble ens = simulate_ensemble(s.sys, phi, x0, s.safe, cfg.sim_config());
  const SafetyVerdict verdict =
      estimate_exit_probability(ens, cfg.horizon, stochastic_zcbf_cap(s.b, s.safe.mu(), h.value(x0)));
  Files files;
  files["summary.json"] = dump(ensemble_summary(ens));
  files["verdict.json"] = dump(to_json(verdict));
  files["trajectories.csv"] = render(
      [&](std::ostream& os) { write_trajectories_csv(os, ens, h, cfg.trajectory_paths); });
  files["mean_trajectory.csv"] = render([&](std::ostream& os) { write_mean_trajectory_csv(os, ens, h); });
  write_files(cfg.out, files);
  return {verdict.within_cap() ? kExitOk : kExitInconsistent,
          cfg.plant + " (" + cfg.compensator + "): " + verdict_line(verdict) + "\n"};
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "motivation") return run_motivation(cfg);
  if (cfg.experiment == "example1" || cfg.experiment == "example2") return run_example(cfg);
  if (cfg.experiment == "sweep") return run_sweep(cfg);
  if (cfg.experiment == "check") return run_check(cfg);
  if (cfg.experiment == "simulate") return run_simulate(cfg);
  throw ConfigError("experiment: unknown experiment '" + cfg.experiment + "'");
}

}  // namespace scbf
