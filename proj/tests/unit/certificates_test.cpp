#include <cmath>

#include <gtest/gtest.h>

#include "fields.hpp"
#include "scbf/certificates.hpp"
#include "scbf/compensators.hpp"
#include "scbf/errors.hpp"

namespace scbf {
namespace {

struct HalfLine {
  HalfLineParams p = derive_half_line_params(1.0, 1.0, 0.1, 1.0);
  ControlAffineSDE sys = single_integrator(0.1, constant_pre_input(-1.0));
  BarrierPair fields = half_line_fields(p);
};

PointSet interior(double alpha) {
  return concat_points({geometric_points(alpha, 1.0, kBoundaryClip, 20.0, 2000),
                        linspace_points(alpha + kBoundaryClip, alpha + 20.0, 2000)});
}

TEST(AsCertificates, MinNormPassesOnHalfLine) {
  HalfLine e;
  const auto phi = min_norm_compensator(e.sys, e.fields.h, 1.0);
  const auto grid = interior(1.0);
  const auto r = check_as_rcbf(e.sys, phi, e.fields.B, 1.0, grid);
  EXPECT_TRUE(r.passed) << r.worst_margin;
  EXPECT_EQ(r.points_checked, grid.size());
  EXPECT_EQ(r.kind, CertificateKind::as_rcbf);
  const auto z = check_as_zcbf(e.sys, phi, e.fields.h, 1.0, grid);
  EXPECT_TRUE(z.passed) << z.worst_margin;
}

TEST(AsCertificates, OpenLoopFailsNearBoundary) {
  HalfLine e;
  const auto r = check_as_rcbf(e.sys, zero_compensator(1), e.fields.B, 1.0, interior(1.0));
  EXPECT_FALSE(r.passed);
  EXPECT_LT(r.worst_margin, 0.0);
  EXPECT_LT(r.worst_point(0) - 1.0, 1.0);
}

TEST(AsCertificates, ZcbfMarginIsScaledRcbfMargin) {
  // margin_ZCBF = h^2 margin_RCBF, so both pass or fail together pointwise.
  HalfLine e;
  const Compensator phi = zero_compensator(1);
  for (const auto& x : linspace_points(1.001, 3.0, 50)) {
    const PointSet one{x};
    const auto r = check_as_rcbf(e.sys, phi, e.fields.B, 1.0, one);
    const auto z = check_as_zcbf(e.sys, phi, e.fields.h, 1.0, one);
    const double h = e.fields.h.value(x);
    EXPECT_NEAR(z.worst_margin, h * h * r.worst_margin, 1e-10 * std::max(1.0, std::abs(z.worst_margin)));
    EXPECT_EQ(z.passed, r.passed);
  }
}

TEST(AsCertificates, ParameterErrors) {
  HalfLine e;
  const auto phi = zero_compensator(1);
  EXPECT_THROW(check_as_rcbf(e.sys, phi, e.fields.B, 0.0, interior(1.0)), ParameterError);
  EXPECT_THROW(check_as_rcbf(e.sys, phi, e.fields.B, 1.0, PointSet{}), ParameterError);
  EXPECT_THROW(check_as_rcbf(e.sys, phi, e.fields.B, 1.0, PointSet{scalar_vector(0.5)}), DomainError);
}

TEST(StochasticZcbf, HalfLinePassesWithDerivedRate) {
  HalfLine e;
  const SafeSet safe(e.fields.h, e.p.mu);
  const auto phi = half_line_compensator(e.p, constant_pre_input(-1.0));
  const auto grid = filter_points(linspace_points(-3.0, e.p.x_mu, 4000),
                                  [&](const Vector& x) { return safe.in_sublevel(x); });
  const auto r = check_stochastic_zcbf(e.sys, phi, safe, e.p.b, grid);
  EXPECT_TRUE(r.passed) << r.worst_margin;
  ASSERT_TRUE(r.strict.has_value());
  // U_M = b c^2 / 2 holds with equality, so the strict form does not.
  EXPECT_FALSE(*r.strict);
  EXPECT_EQ(r.parameters.at("b"), e.p.b);
  EXPECT_FALSE(r.notes.empty());

  const auto too_big = check_stochastic_zcbf(e.sys, phi, safe, 1.5 * e.p.b, grid);
  EXPECT_FALSE(too_big.passed);
  EXPECT_LT(too_big.worst_margin, 0.0);
}

TEST(StochasticZcbf, RejectsPointsAboveLayer) {
  HalfLine e;
  const SafeSet safe(e.fields.h, e.p.mu);
  const auto phi = half_line_compensator(e.p, constant_pre_input(-1.0));
  EXPECT_THROW(check_stochastic_zcbf(e.sys, phi, safe, e.p.b, PointSet{scalar_vector(2.0)}),
               DomainError);
}

TEST(StochasticZcbf, IntervalRateBoundary) {
  const auto p = derive_interval_params(0.0, 1.0, 0.01, 1.0);
  const auto sys = single_integrator(0.01, constant_pre_input(1.0));
  const auto fields = interval_fields(p);
  const SafeSet safe(fields.h, p.mu);
  const auto phi = interval_compensators(p, constant_pre_input(1.0)).saturated;
  const auto grid = filter_points(
      concat_points({linspace_points(-2.0, p.x_mu_left, 3000), linspace_points(p.x_mu_right, 2.0, 3000),
                     linspace_points(-1.0, p.x_mu_left, 2000), linspace_points(p.x_mu_right, 1.0, 2000)}),
      [&](const Vector& x) { return safe.in_sublevel(x); });
  const auto derived = check_stochastic_zcbf(sys, phi, safe, p.b, grid);
  EXPECT_TRUE(derived.passed) << derived.worst_margin;
  // The closed-form rate K is slightly too large inside the layer.
  const auto closed = check_stochastic_zcbf(sys, phi, safe, p.b_closed_form, grid);
  EXPECT_FALSE(closed.passed);
  EXPECT_LT(closed.worst_margin, -1e-9);
  EXPECT_GT(closed.worst_margin, -1e-8);
}

TEST(Fiip, QuadraticLyapunov) {
  // dx = -x dt + 0.5 dw, Y = x^2: L Y = -2x^2 + 0.25 <= 0 * Y + 0.25.
  ControlAffineSDE sys(
      1, 1, 1, [](const Vector& x) { return Vector(-x); },
      [](const Vector&) { return scalar_matrix(1.0); },
      [](const Vector&) { return scalar_matrix(0.5); },
      [](const Vector&) { return scalar_vector(0.0); });
  const auto Y = ScalarField::from_scalar([](double x) { return x * x; },
                                          [](double x) { return 2.0 * x; }, [](double) { return 2.0; });
  const auto grid = linspace_points(-5.0, 5.0, 101);
  EXPECT_TRUE(check_fiip_condition(sys, zero_compensator(1), Y, 0.0, 0.25, grid).passed);
  EXPECT_FALSE(check_fiip_condition(sys, zero_compensator(1), Y, 0.0, 0.2, grid).passed);
  EXPECT_THROW(check_fiip_condition(sys, zero_compensator(1), Y, -1.0, 0.2, grid), ParameterError);
}

TEST(Robustness, DiffusionScaling) {
  const auto fields = motivating_fields(1.0);
  const MatrixMap sigma = [](const Vector&) { return scalar_matrix(0.1); };
  const MatrixMap half = [](const Vector&) { return scalar_matrix(0.05); };
  const MatrixMap twice = [](const Vector&) { return scalar_matrix(0.2); };
  const auto grid = linspace_points(1.01, 5.0, 100);
  EXPECT_TRUE(check_diffusion_robustness_as(fields.B, sigma, half, grid).passed);
  EXPECT_FALSE(check_diffusion_robustness_as(fields.B, sigma, twice, grid).passed);
  EXPECT_TRUE(check_diffusion_robustness_stoch(fields.h, sigma, half, 0.5, grid).passed);
  EXPECT_FALSE(check_diffusion_robustness_stoch(fields.h, sigma, twice, 1.0, grid).passed);
  EXPECT_THROW(check_diffusion_robustness_stoch(fields.h, sigma, half, 0.0, grid), ParameterError);
  // On the disk in R^2 a sigma' = a sigma scaling is always admissible.
  const auto disk = testing::disk_field();
  const MatrixMap s2 = [](const Vector& x) {
    Matrix s(2, 2);
    s << 0.3, 0.1 * x(1), 0.0, 0.2;
    return s;
  };
  const MatrixMap s2a = [s2](const Vector& x) { return Matrix(0.7 * s2(x)); };
  const auto pts = filter_points(rectangular_grid(Vector::Constant(2, -0.9), Vector::Constant(2, 0.9), {20, 20}),
                                 [&](const Vector& x) { return disk.value(x) > 0.0; });
  EXPECT_TRUE(check_diffusion_robustness_stoch(disk, s2, s2a, 0.7, pts).passed);
}

TEST(SafetyBounds, Values) {
  EXPECT_NEAR(safety_probability_bound(200.0, 0.009901951359278483), 0.86198463671312561, 1e-15);
  EXPECT_NEAR(safety_probability_bound(2.0, 1.0), 1.0 - std::exp(-2.0), 1e-16);
  EXPECT_EQ(scaled_safety_bound(200.0, 0.01, 0.0), 1.0);
  EXPECT_NEAR(scaled_safety_bound(200.0, 0.009901951359278483, 0.5), 1.0 - std::exp(-4.0 * 1.9803902718556966),
              1e-15);
  EXPECT_DOUBLE_EQ(scaled_safety_bound(3.0, 0.2, 1.0), safety_probability_bound(3.0, 0.2));
  EXPECT_THROW(safety_probability_bound(0.0, 1.0), ParameterError);
  EXPECT_THROW(scaled_safety_bound(1.0, 1.0, 1.5), ParameterError);
  // Monotone in b, mu and decreasing a.
  EXPECT_LT(safety_probability_bound(1.0, 0.1), safety_probability_bound(2.0, 0.1));
  EXPECT_LT(scaled_safety_bound(1.0, 0.1, 0.9), scaled_safety_bound(1.0, 0.1, 0.5));
}

TEST(Report, JsonFields) {
  HalfLine e;
  const auto r = check_as_rcbf(e.sys, zero_compensator(1), e.fields.B, 1.0, interior(1.0));
  const auto j = to_json(r);
  for (const char* key : {"kind", "passed", "worst_margin", "worst_point", "points_checked", "parameters"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["kind"], "AS_RCBF");
}

}  // namespace
}  // namespace scbf
