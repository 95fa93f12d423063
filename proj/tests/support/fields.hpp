#pragma once

// Example plants and fields shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scbf/barrier_calculus.hpp"
#include "scbf/compensators.hpp"

namespace scbf::testing {

struct NamedField {
  std::string name;
  ScalarField h;
  std::vector<Vector> points;  // where h is evaluated (inside its domain)
};

inline std::vector<Vector> uniform_points(double lo, double hi, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(scalar_vector(dist(rng)));
  return out;
}

// Disk barrier in R^2: h = 1 - x1^2 - x2^2.
inline ScalarField disk_field() {
  return ScalarField(
      [](const Vector& x) { return 1.0 - x.squaredNorm(); },
      [](const Vector& x) { return RowVector(-2.0 * x.transpose()); },
      [](const Vector& x) { return Matrix(-2.0 * Matrix::Identity(x.size(), x.size())); });
}

// dx = (rotation + input on x2) dt + state dependent diffusion, n = 2, m = 1, d = 2.
inline ControlAffineSDE planar_plant() {
  return ControlAffineSDE(
      2, 1, 2,
      [](const Vector& x) {
        Vector f(2);
        f << x(1), -x(0) - 0.3 * x(1);
        return f;
      },
      [](const Vector&) {
        Matrix g(2, 1);
        g << 0.0, 1.0;
        return g;
      },
      [](const Vector& x) {
        Matrix s(2, 2);
        s << 0.1, 0.0, 0.05 * x(0), 0.2;
        return s;
      },
      [](const Vector& x) {
        Vector u(1);
        u << -0.5 * x(1);
        return u;
      });
}

// The example fields on sample points inside {h > 0}.
inline std::vector<NamedField> example_fields(std::size_t n, std::uint64_t seed) {
  std::vector<NamedField> out;
  out.push_back({"motivating h_s", motivating_fields(1.0).h, uniform_points(1.0 + 1e-3, 9.0, n, seed)});

  const auto p1 = derive_half_line_params(1.0, 1.0, 0.1, 1.0, 7.0);
  auto pts1 = uniform_points(1.0 + 1e-3, 9.0, n, seed + 1);
  out.push_back({"half-line h_1 (N = 7)", half_line_fields(p1).h, pts1});

  const auto p2 = derive_interval_params(0.0, 1.0, 0.01, 1.0);
  out.push_back({"interval h_2", interval_fields(p2).h, uniform_points(-0.999, 0.999, n, seed + 2)});
  return out;
}

}  // namespace scbf::testing
