#pragma once

#include "scbf/barrier_calculus.hpp"
#include "scbf/compensator.hpp"

namespace scbf {

// Threshold below which L_g h (L_g h)^T is treated as zero.
inline constexpr double kSingularGain = 1e-300;

/// Closed-form min-norm compensator enforcing the almost-sure ZCBF condition.
///
/// With I = L^D(0, u_o, h) and J = -gamma h + h^2 L^I_sigma(1/h):
///   phi(x) = -(I - J) / (L_g h L_g h^T) L_g h^T   if I < J,
///   phi(x) = 0                                   if I >= J.
/// Only defined on chi = {h > 0}. When L_g h vanishes while I < J the
/// transversality assumption is violated and SingularityError is thrown.
Compensator min_norm_compensator(const ControlAffineSDE& sys, const ScalarField& h, double gamma);

VectorMap constant_pre_input(double value);

/// Scalar plant dx = (u_o(x) + u) dt + c dw.
ControlAffineSDE single_integrator(double c, VectorMap pre_input);

struct BarrierPair {
  ScalarField h;  // zeroing barrier
  ScalarField B;  // reciprocal barrier, only defined where h > 0
};

/// h_s(x) = x - alpha and B_s = 1 / h_s.
BarrierPair motivating_fields(double alpha);

struct MotivatingCompensators {
  Compensator zeroing;     // deterministic ZCBF feedback, enforces L^D h_s >= -gamma h_s
  Compensator reciprocal;  // enforces L B_s <= gamma B_s; diverges as x -> alpha+
};

MotivatingCompensators motivating_compensators(double alpha, double gamma, double c,
                                               VectorMap pre_input);

// ---------------------------------------------------------------------------
// Safe half-line (alpha, inf) with bounded input |u_o + u| <= U_M.

struct HalfLineParams {
  double alpha = 1.0;
  double gamma = 1.0;
  double c = 0.1;
  double input_bound = 1.0;  // U_M
  double cap_start = 1e10;   // N, where the polynomial cap p_N switches on

  // Derived.
  double mu = 0.0;        // boundary-layer height, h(x_mu)
  double x_mu = 0.0;      // alpha + mu
  double b = 0.0;         // stochastic ZCBF rate 2 U_M / c^2
  double saturation = 0.0;  // D: h-level above which u_o + phi = -U_M (for u_o <= -U_M)
  double x_saturation = 0.0;  // alpha + D
};

/// Closed-form layer height, saturation level and rate. Throws
/// ConstructionError when the cap start N does not exceed alpha + D.
HalfLineParams derive_half_line_params(double alpha, double gamma, double c, double input_bound,
                                       double cap_start = 1e10);

/// p_N(x) = 1/2 (x-N)^4 + 1/2 (x-N)^3 |x-N|, identically zero for x < N.
ScalarField polynomial_cap(double cap_start);

/// h_1 = 1 / B_1 with B_1 = 1/(x - alpha) + p_N(x); h_1 = x - alpha for x < N.
BarrierPair half_line_fields(const HalfLineParams& p);

/// Input-saturated compensator phi_1. Total input u_o + phi_1 is +U_M on
/// x <= x_mu, follows J_2 = -gamma h_s + c^2 / h_s in the interior and is
/// -U_M where both u_o and J_2 are at or below -U_M.
Compensator half_line_compensator(const HalfLineParams& p, VectorMap pre_input);

/// J_2(x) = -gamma (x - alpha) + c^2 / (x - alpha), the unsaturated total input.
double half_line_target_input(const HalfLineParams& p, double x);

// ---------------------------------------------------------------------------
// Safe interval (alpha - beta, alpha + beta) with h_2 = sin(theta(x)),
// theta(x) = pi/(2 beta) (x - alpha + beta).

struct IntervalParams {
  double alpha = 0.0;
  double beta = 1.0;
  double c = 0.01;
  double input_bound = 1.0;  // U_M

  // Derived.
  double theta_mu = 0.0;      // theta at the left layer edge
  double tan_theta_mu = 0.0;  // pi c^2 / (2 beta U_M), must stay below sqrt(2)
  double mu = 0.0;            // sin(theta_mu)
  double x_mu_left = 0.0;
  double x_mu_right = 0.0;
  double b = 0.0;              // largest rate satisfying the stochastic ZCBF condition
  double b_closed_form = 0.0;  // 4 beta U_M / (pi c^2)
  double gamma = 0.0;          // pi^2 c^2 / (8 beta^2), AS-ZCBF rate
};

IntervalParams derive_interval_params(double alpha, double beta, double c, double input_bound);

/// sin and cos of theta(x), evaluated from the nearest reference point so that
/// both are accurate near the edges and cos is exactly 0 at x = alpha.
struct IntervalAngle {
  double sin_theta;
  double cos_theta;
};
IntervalAngle interval_angle(const IntervalParams& p, double x);

/// Phi_2(x) = pi c^2 / (2 beta tan(theta(x))).
double interval_target_input(const IntervalParams& p, double x);

BarrierPair interval_fields(const IntervalParams& p);

struct IntervalCompensators {
  Compensator min_norm;   // phi_N2, only on the open interval, unbounded at its edges
  Compensator saturated;  // phi_2, total input within [-U_M, U_M] everywhere
};

IntervalCompensators interval_compensators(const IntervalParams& p, VectorMap pre_input);

}  // namespace scbf
