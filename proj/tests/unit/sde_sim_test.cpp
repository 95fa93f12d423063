#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "fields.hpp"
#include "scbf/compensators.hpp"
#include "scbf/errors.hpp"
#include "scbf/rng.hpp"
#include "scbf/sde_sim.hpp"

namespace scbf {
namespace {

ControlAffineSDE decay_plant(double c) {
  return ControlAffineSDE(
      1, 1, 1, [](const Vector& x) { return Vector(-x); },
      [](const Vector&) { return scalar_matrix(0.0); },
      [c](const Vector&) { return scalar_matrix(c); },
      [](const Vector&) { return scalar_vector(0.0); });
}

struct Example1 {
  HalfLineParams p = derive_half_line_params(1.0, 1.0, 0.1, 1.0);
  ControlAffineSDE sys = single_integrator(0.1, constant_pre_input(-1.0));
  Compensator phi = half_line_compensator(p, constant_pre_input(-1.0));
  SafeSet safe{half_line_fields(p).h, p.mu};
};

SimConfig config(double dt, double horizon, std::size_t paths, std::uint64_t seed = 1) {
  SimConfig c;
  c.dt = dt;
  c.horizon = horizon;
  c.n_paths = paths;
  c.master_seed = seed;
  return c;
}

bool same_paths(const PathEnsemble& a, const PathEnsemble& b) {
  if (a.paths.size() != b.paths.size()) return false;
  for (std::size_t i = 0; i < a.paths.size(); ++i) {
    const auto& p = a.paths[i];
    const auto& q = b.paths[i];
    if (p.times != q.times || p.exit_time_chi != q.exit_time_chi ||
        p.exit_time_chi_mu != q.exit_time_chi_mu || p.states.size() != q.states.size()) {
      return false;
    }
    for (std::size_t k = 0; k < p.states.size(); ++k) {
      if (p.states[k] != q.states[k]) return false;
    }
  }
  return true;
}

TEST(EulerMaruyamaStep, Examples) {
  const auto sys = decay_plant(0.0);
  EXPECT_DOUBLE_EQ(euler_maruyama_step(sys, zero_compensator(1), scalar_vector(1.0), 0.1,
                                       scalar_vector(0.0))(0),
                   0.9);
  const auto pure = single_integrator(0.1, constant_pre_input(0.0));
  EXPECT_NEAR(euler_maruyama_step(pure, zero_compensator(1), scalar_vector(2.0), 0.01,
                                  scalar_vector(0.2))(0),
              2.02, 1e-15);
  // Inside the layer the closed loop drifts at exactly U_M.
  Example1 e;
  for (double x : {0.5, 1.0, 1.005}) {
    const double next = euler_maruyama_step(e.sys, e.phi, scalar_vector(x), 1e-3, scalar_vector(0.0))(0);
    EXPECT_NEAR(next - x, 1e-3, 1e-15);
  }
}

TEST(EulerMaruyamaStep, Errors) {
  const auto sys = decay_plant(0.1);
  EXPECT_THROW(euler_maruyama_step(sys, zero_compensator(1), scalar_vector(1.0), 0.0, scalar_vector(0.0)),
               ParameterError);
  EXPECT_THROW(euler_maruyama_step(sys, zero_compensator(1), scalar_vector(1.0), 0.1, Vector::Zero(2)),
               DimensionError);
  const Compensator bad([](const Vector&) { return scalar_vector(std::nan("")); }, "nan");
  EXPECT_THROW(euler_maruyama_step(sys, bad, scalar_vector(1.0), 0.1, scalar_vector(0.0)), NumericalBlowup);
  const auto uo = constant_pre_input(-1.0);
  const auto reciprocal = motivating_compensators(1.0, 1.0, 0.1, uo).reciprocal;
  EXPECT_THROW(euler_step(single_integrator(0.1, uo), reciprocal, scalar_vector(0.9), 0.1), NumericalBlowup);
}

TEST(PathRng, DeterministicAndIndependent) {
  PathRng a(5, 3);
  PathRng b(5, 3);
  PathRng c(5, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs = differs || x != c.normal();
  }
  EXPECT_TRUE(differs);
  PathRng u(0, 0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(SimulatePath, NoiselessExample1DescendsWithoutExit) {
  Example1 e;
  const auto sys = e.sys.with_diffusion([](const Vector&) { return scalar_matrix(0.0); });
  auto cfg = config(1e-3, 10.0, 1);
  const auto path = simulate_path(sys, e.phi, scalar_vector(4.0), e.safe, cfg, 0);
  EXPECT_FALSE(path.exit_time_chi.has_value());
  EXPECT_EQ(path.times.size(), cfg.steps() + 1);
  for (std::size_t k = 1; k < path.states.size(); ++k) {
    ASSERT_LE(path.states[k](0), path.states[k - 1](0) + 1e-15);
  }
  // Equilibrium of J_2: x - alpha = c / sqrt(gamma) = 0.1.
  EXPECT_NEAR(path.states.back()(0), 1.1, 1e-3);
}

TEST(SimulatePath, StartOutsideExitsAtZero) {
  Example1 e;
  const auto path = simulate_path(e.sys, e.phi, scalar_vector(0.5), e.safe, config(1e-3, 0.1, 1), 0);
  ASSERT_TRUE(path.exit_time_chi.has_value());
  EXPECT_EQ(*path.exit_time_chi, 0.0);
  ASSERT_TRUE(path.exit_time_chi_mu.has_value());
  EXPECT_EQ(*path.exit_time_chi_mu, 0.0);
}

TEST(SimulatePath, ExitTimesAreFirstCrossings) {
  Example1 e;
  auto cfg = config(1e-3, 2.0, 1, 99);
  // Start inside the layer so that both exit times are exercised.
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto path = simulate_path(e.sys, e.phi, scalar_vector(1.005), e.safe, cfg, i);
    const auto& h = e.safe.field();
    if (path.exit_time_chi) {
      const auto k = static_cast<std::size_t>(std::llround(*path.exit_time_chi / cfg.dt));
      EXPECT_LE(h.value(path.states[k]), 0.0);
      for (std::size_t j = 0; j < k; ++j) ASSERT_GT(h.value(path.states[j]), 0.0);
      ASSERT_TRUE(path.exit_time_chi_mu);
      EXPECT_LE(*path.exit_time_chi_mu, *path.exit_time_chi);
    }
    if (path.exit_time_chi_mu) {
      const auto k = static_cast<std::size_t>(std::llround(*path.exit_time_chi_mu / cfg.dt));
      EXPECT_FALSE(e.safe.in_boundary_layer(path.states[k]));
      for (std::size_t j = 0; j < k; ++j) ASSERT_TRUE(e.safe.in_boundary_layer(path.states[j]));
    }
  }
}

TEST(SimulatePath, SameSeedSamePath) {
  Example1 e;
  const auto cfg = config(1e-3, 1.0, 1, 77);
  const auto a = simulate_path(e.sys, e.phi, scalar_vector(1.2), e.safe, cfg, 5);
  const auto b = simulate_path(e.sys, e.phi, scalar_vector(1.2), e.safe, cfg, 5);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) ASSERT_EQ(a.states[k], b.states[k]);
  EXPECT_EQ(a.path_seed, 5u);
}

TEST(SimulatePath, RecordStride) {
  Example1 e;
  auto cfg = config(1e-3, 1.0, 1);
  cfg.record_stride = 100;
  const auto path = simulate_path(e.sys, e.phi, scalar_vector(2.0), e.safe, cfg, 0);
  ASSERT_EQ(path.times.size(), 11u);
  EXPECT_NEAR(path.times[3], 0.3, 1e-15);
  EXPECT_EQ(path.states.size(), path.inputs.size());
  EXPECT_EQ(path.states.size(), path.pre_inputs.size());
}

TEST(SimulatePath, NoiselessMatchesEulerStepping) {
  const auto sys = testing::planar_plant().with_diffusion([](const Vector&) {
    return Matrix(Matrix::Zero(2, 2));
  });
  const Compensator phi([](const Vector& x) { return scalar_vector(-0.2 * x(0)); }, "linear");
  const SafeSet safe(testing::disk_field());
  Vector x0(2);
  x0 << 0.5, -0.2;
  const auto cfg = config(1e-3, 2.0, 1);
  const auto path = simulate_path(sys, phi, x0, safe, cfg, 0);
  Vector x = x0;
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    ASSERT_LE((path.states[k] - x).cwiseAbs().maxCoeff(), 1e-14) << k;
    x = euler_step(sys, phi, x, cfg.dt);
  }
}

TEST(SimulateEnsemble, IndependentOfWorkerCount) {
  Example1 e;
  auto cfg = config(1e-3, 0.5, 24, 2024);
  cfg.workers = 1;
  const auto serial = simulate_ensemble(e.sys, e.phi, scalar_vector(1.02), e.safe, cfg);
  for (unsigned w : {2u, 3u, 8u}) {
    cfg.workers = w;
    const auto parallel = simulate_ensemble(e.sys, e.phi, scalar_vector(1.02), e.safe, cfg);
    EXPECT_TRUE(same_paths(serial, parallel)) << w << " workers";
  }
}

TEST(SimulateEnsemble, MeanTrajectory) {
  Example1 e;
  const auto cfg = config(1e-3, 0.2, 7, 3);
  const auto ens = simulate_ensemble(e.sys, e.phi, scalar_vector(1.3), e.safe, cfg);
  for (std::size_t k = 0; k < ens.mean_trajectory.size(); ++k) {
    double s = 0.0;
    for (const auto& p : ens.paths) s += p.states[k](0);
    EXPECT_NEAR(ens.mean_trajectory[k](0), s / 7.0, 1e-12);
  }
  const auto one = simulate_ensemble(e.sys, e.phi, scalar_vector(1.3), e.safe, config(1e-3, 0.2, 1));
  for (std::size_t k = 0; k < one.mean_trajectory.size(); ++k) {
    EXPECT_EQ(one.mean_trajectory[k], one.paths[0].states[k]);
  }
}

TEST(SimulateEnsemble, IncrementStatistics) {
  // Pure diffusion with c = 1: x_{k+1} - x_k = dW, so dW / sqrt(dt) should be N(0, 1).
  const auto sys = single_integrator(1.0, constant_pre_input(0.0));
  const SafeSet safe(ScalarField::from_scalar([](double) { return 1.0; }, [](double) { return 0.0; },
                                              [](double) { return 0.0; }));
  const auto cfg = config(1e-2, 1.0, 200, 8);
  const auto ens = simulate_ensemble(sys, zero_compensator(1), scalar_vector(0.0), safe, cfg);
  double sum = 0.0;
  double sq = 0.0;
  std::size_t n = 0;
  for (const auto& p : ens.paths) {
    for (std::size_t k = 1; k < p.states.size(); ++k) {
      const double z = (p.states[k](0) - p.states[k - 1](0)) / std::sqrt(cfg.dt);
      sum += z;
      sq += z * z;
      ++n;
    }
  }
  const double N = static_cast<double>(n);
  const double mean = sum / N;
  const double var = sq / N - mean * mean;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(N));
  EXPECT_LT(std::abs(var - 1.0), 4.0 * std::sqrt(2.0 / N));
}

TEST(SimulateEnsemble, BlowupCarriesPathIndex) {
  const auto uo = constant_pre_input(-1.0);
  const auto sys = single_integrator(0.1, uo);
  const auto reciprocal = motivating_compensators(1.0, 1.0, 0.1, uo).reciprocal;
  const SafeSet safe(motivating_fields(1.0).h);
  try {
    simulate_ensemble(sys, reciprocal, scalar_vector(1.0), safe, config(1e-3, 0.1, 4));
    FAIL() << "expected a blowup";
  } catch (const NumericalBlowup& err) {
    EXPECT_NE(std::string(err.what()).find("path 0"), std::string::npos) << err.what();
  }
}

TEST(SimConfig, Validation) {
  EXPECT_THROW(config(0.0, 1.0, 1).validate(), ParameterError);
  EXPECT_THROW(config(0.1, 0.05, 1).validate(), ParameterError);
  EXPECT_THROW(config(0.1, 1.0, 0).validate(), ParameterError);
  EXPECT_EQ(config(1e-4, 10.0, 1).steps(), 100000u);
}

TEST(Export, TrajectoryCsvSchema) {
  Example1 e;
  const auto ens = simulate_ensemble(e.sys, e.phi, scalar_vector(1.5), e.safe, config(0.1, 0.2, 3));
  std::ostringstream os;
  write_trajectories_csv(os, ens, e.safe.field(), 2);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "path_id,t,x_1,u,u_o,h,exited_chi");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 6), "0,0,1.");
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2u * 3u);

  const auto summary = ensemble_summary(ens);
  for (const char* key : {"n_paths", "exit_fraction_chi", "exit_fraction_chi_mu", "ci_low", "ci_high", "config"}) {
    EXPECT_TRUE(summary.contains(key)) << key;
  }
  EXPECT_EQ(summary["n_paths"], 3);
}

}  // namespace
}  // namespace scbf
