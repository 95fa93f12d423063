#include "scbf/compensators.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "scbf/errors.hpp"

namespace scbf {
namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive and finite");
  }
}

void require_finite(const char* name, double v) {
  if (!std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be finite");
  }
}

}  // namespace

Compensator min_norm_compensator(const ControlAffineSDE& sys, const ScalarField& h,
                                 double gamma) {
  require_positive("gamma", gamma);
  return Compensator(
      [sys, h, gamma](const Vector& x) {
        const double hv = h.value(x);
        if (!(hv > 0.0)) {
          throw DomainError("min-norm compensator is only defined where h > 0");
        }
        const RowVector grad = h.gradient(x);
        const RowVector lg = grad * sys.input_gain(x);
        const double along_drift = (grad * sys.drift(x)).value();
        const double active = along_drift + (lg * sys.pre_input(x)).value();  // I
        // h^2 L^I_sigma(1/h) = 1/2 tr[sigma sigma^T (2/h grad^T grad - Hess h)]
        const Matrix sigma = sys.diffusion(x);
        const Matrix curvature = (2.0 / hv) * (grad.transpose() * grad) - h.hessian(x);
        const double target = -gamma * hv + 0.5 * (sigma * sigma.transpose() * curvature).trace();
        if (active >= target) {
          return Vector(Vector::Zero(sys.input_dim()));
        }
        const double gain = lg.squaredNorm();
        if (gain < kSingularGain) {
          throw SingularityError(
              "L_g h vanishes while the barrier constraint is active (I < J)");
        }
        return Vector(-(active - target) / gain * lg.transpose());
      },
      "min-norm AS-ZCBF compensator", "h > 0");
}

VectorMap constant_pre_input(double value) {
  return [value](const Vector&) { return scalar_vector(value); };
}

ControlAffineSDE single_integrator(double c, VectorMap pre_input) {
  require_finite("c", c);
  return ControlAffineSDE(
      1, 1, 1, [](const Vector&) { return scalar_vector(0.0); },
      [](const Vector&) { return scalar_matrix(1.0); },
      [c](const Vector&) { return scalar_matrix(c); }, std::move(pre_input));
}

BarrierPair motivating_fields(double alpha) {
  require_finite("alpha", alpha);
  auto h = ScalarField::from_scalar([alpha](double x) { return x - alpha; },
                                    [](double) { return 1.0; }, [](double) { return 0.0; });
  auto B = ScalarField::from_scalar(
      [alpha](double x) { return 1.0 / (x - alpha); },
      [alpha](double x) { return -1.0 / ((x - alpha) * (x - alpha)); },
      [alpha](double x) {
        const double s = x - alpha;
        return 2.0 / (s * s * s);
      },
      "x > alpha", [alpha](double x) { return x > alpha; });
  return {std::move(h), std::move(B)};
}

MotivatingCompensators motivating_compensators(double alpha, double gamma, double c,
                                               VectorMap pre_input) {
  require_finite("alpha", alpha);
  require_positive("gamma", gamma);
  require_finite("c", c);
  Compensator zeroing(
      [alpha, gamma, pre_input](const Vector& x) {
        const double uo = pre_input(x)(0);
        const double hs = x(0) - alpha;
        return scalar_vector(uo + gamma * hs < 0.0 ? -uo - gamma * hs : 0.0);
      },
      "deterministic ZCBF compensator for h_s", "R");
  Compensator reciprocal(
      [alpha, gamma, c, pre_input](const Vector& x) {
        const double hs = x(0) - alpha;
        if (!(hs > 0.0)) {
          throw DomainError("reciprocal compensator is only defined for x > alpha");
        }
        const double uo = pre_input(x)(0);
        const double target = -gamma * hs + c * c / hs;
        return scalar_vector(uo < target ? -uo + target : 0.0);
      },
      "AS-RCBF compensator for B_s", "x > alpha");
  return {std::move(zeroing), std::move(reciprocal)};
}

// ---------------------------------------------------------------------------

HalfLineParams derive_half_line_params(double alpha, double gamma, double c, double input_bound,
                                       double cap_start) {
  require_finite("alpha", alpha);
  require_positive("gamma", gamma);
  require_finite("c", c);
  if (c < 0.0) {
    throw ParameterError("c must be non-negative");
  }
  require_positive("U_M", input_bound);
  require_finite("N", cap_start);

  HalfLineParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  p.c = c;
  p.input_bound = input_bound;
  p.cap_start = cap_start;

  const double root = std::sqrt(input_bound * input_bound + 4.0 * gamma * c * c);
  // (-U_M + root) / (2 gamma), rationalised so it stays accurate as gamma c^2 -> 0.
  p.mu = 2.0 * c * c / (input_bound + root);
  p.saturation = (input_bound + root) / (2.0 * gamma);
  p.x_mu = alpha + p.mu;
  p.x_saturation = alpha + p.saturation;
  p.b = c > 0.0 ? (2.0 * input_bound / c) / c : std::numeric_limits<double>::infinity();

  if (!(p.saturation > p.mu)) {
    throw ConstructionError("saturation level D must exceed the layer height mu");
  }
  if (!(cap_start > p.x_saturation)) {
    throw ConstructionError("cap start N must exceed alpha + D = " +
                            std::to_string(p.x_saturation));
  }
  return p;
}

ScalarField polynomial_cap(double cap_start) {
  require_finite("N", cap_start);
  const double N = cap_start;
  return ScalarField::from_scalar(
      [N](double x) {
        const double d = x - N;
        return 0.5 * d * d * d * d + 0.5 * d * d * d * std::abs(d);
      },
      [N](double x) {
        const double d = x - N;
        return d > 0.0 ? 4.0 * d * d * d : 0.0;
      },
      [N](double x) {
        const double d = x - N;
        return d > 0.0 ? 12.0 * d * d : 0.0;
      });
}

BarrierPair half_line_fields(const HalfLineParams& p) {
  const double alpha = p.alpha;
  const double N = p.cap_start;
  const ScalarField cap = polynomial_cap(N);
  auto cap_jet = [cap](double x) {
    const Vector v = scalar_vector(x);
    return std::array<double, 3>{cap.value(v), cap.gradient(v)(0), cap.hessian(v)(0, 0)};
  };

  // h_1 = s / q with s = x - alpha, q = 1 + s p_N.
  auto h = ScalarField::from_scalar(
      [alpha, cap_jet](double x) {
        const double s = x - alpha;
        return s / (1.0 + s * cap_jet(x)[0]);
      },
      [alpha, cap_jet](double x) {
        const auto [pv, p1, p2] = cap_jet(x);
        const double s = x - alpha;
        const double q = 1.0 + s * pv;
        const double q1 = pv + s * p1;
        return 1.0 / q - s * q1 / (q * q);
      },
      [alpha, cap_jet](double x) {
        const auto [pv, p1, p2] = cap_jet(x);
        const double s = x - alpha;
        const double q = 1.0 + s * pv;
        const double q1 = pv + s * p1;
        const double q2 = 2.0 * p1 + s * p2;
        return (-2.0 * q1 - s * q2) / (q * q) + 2.0 * s * q1 * q1 / (q * q * q);
      },
      "R");

  auto B = ScalarField::from_scalar(
      [alpha, cap_jet](double x) { return 1.0 / (x - alpha) + cap_jet(x)[0]; },
      [alpha, cap_jet](double x) {
        const double s = x - alpha;
        return -1.0 / (s * s) + cap_jet(x)[1];
      },
      [alpha, cap_jet](double x) {
        const double s = x - alpha;
        return 2.0 / (s * s * s) + cap_jet(x)[2];
      },
      "x > alpha", [alpha](double x) { return x > alpha; });
  return {std::move(h), std::move(B)};
}

double half_line_target_input(const HalfLineParams& p, double x) {
  const double hs = x - p.alpha;
  return -p.gamma * hs + p.c * p.c / hs;
}

Compensator half_line_compensator(const HalfLineParams& p, VectorMap pre_input) {
  return Compensator(
      [p, pre_input](const Vector& x) {
        const double bound = p.input_bound;
        const double uo = pre_input(x)(0);
        const double hs = x(0) - p.alpha;
        if (!(hs > 0.0)) {
          return scalar_vector(-uo + bound);
        }
        const double target = half_line_target_input(p, x(0));
        if (std::max({uo, target, bound}) != bound) {
          return scalar_vector(-uo + bound);
        }
        if (uo <= -bound && target <= -bound) {
          return scalar_vector(-uo - bound);
        }
        if (uo < target && target >= -bound && target <= bound) {
          return scalar_vector(-uo + target);
        }
        return scalar_vector(0.0);
      },
      "input-saturated half-line compensator", "R");
}

// ---------------------------------------------------------------------------

IntervalParams derive_interval_params(double alpha, double beta, double c, double input_bound) {
  require_finite("alpha", alpha);
  require_positive("beta", beta);
  require_positive("c", c);
  require_positive("U_M", input_bound);

  IntervalParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.c = c;
  p.input_bound = input_bound;
  p.gamma = kPi * kPi * c * c / (8.0 * beta * beta);
  p.b_closed_form = 4.0 * beta * input_bound / (kPi * c * c);
  p.tan_theta_mu = kPi * c * c / (2.0 * beta * input_bound);
  if (!(p.tan_theta_mu < std::sqrt(2.0))) {
    throw ConstructionError("layer edge violates |tan(theta_mu)| < sqrt(2): tan = " +
                            std::to_string(p.tan_theta_mu));
  }
  p.theta_mu = std::atan(p.tan_theta_mu);
  p.mu = std::sin(p.theta_mu);
  p.x_mu_left = alpha - beta + 2.0 * beta * p.theta_mu / kPi;
  p.x_mu_right = alpha + beta - 2.0 * beta * p.theta_mu / kPi;

  // Inside the layer the condition needs b <= (K - tan t) / cos t for every
  // t in (0, theta_mu]; outside the interval it needs b <= K.
  const double K = p.b_closed_form;
  auto rate_limit = [K](double t) { return (K - std::tan(t)) / std::cos(t); };
  const auto [t_min, r_min] = boost::math::tools::brent_find_minima(
      rate_limit, 0.0, p.theta_mu, std::numeric_limits<double>::digits / 2);
  (void)t_min;
  p.b = std::min({K, r_min, rate_limit(p.theta_mu)});
  return p;
}

IntervalAngle interval_angle(const IntervalParams& p, double x) {
  const double k = kPi / (2.0 * p.beta);
  const double offset = x - p.alpha;
  if (std::abs(offset) <= 0.5 * p.beta) {
    const double s = k * offset;  // theta = s + pi/2
    return {std::cos(s), -std::sin(s)};
  }
  if (offset < 0.0) {
    const double t = k * (x - (p.alpha - p.beta));  // theta = t
    return {std::sin(t), std::cos(t)};
  }
  const double t = k * ((p.alpha + p.beta) - x);  // theta = pi - t
  return {std::sin(t), -std::cos(t)};
}

double interval_target_input(const IntervalParams& p, double x) {
  const auto [s, co] = interval_angle(p, x);
  return kPi * p.c * p.c / (2.0 * p.beta) * co / s;
}

BarrierPair interval_fields(const IntervalParams& p) {
  const double k = kPi / (2.0 * p.beta);
  const double lo = p.alpha - p.beta;
  const double hi = p.alpha + p.beta;
  auto h = ScalarField::from_scalar(
      [p, k, lo, hi](double x) {
        if (x <= lo) return k * (x - lo);
        if (x >= hi) return -k * (x - hi);
        return interval_angle(p, x).sin_theta;
      },
      [p, k, lo, hi](double x) {
        if (x <= lo) return k;
        if (x >= hi) return -k;
        return k * interval_angle(p, x).cos_theta;
      },
      [p, k, lo, hi](double x) {
        if (x <= lo || x >= hi) return 0.0;
        return -k * k * interval_angle(p, x).sin_theta;
      },
      "R");
  auto B = reciprocal_field(h);
  return {std::move(h), std::move(B)};
}

IntervalCompensators interval_compensators(const IntervalParams& p, VectorMap pre_input) {
  const double k = kPi / (2.0 * p.beta);
  // Returns true when the barrier constraint is active (I < J) at x.
  auto constraint_active = [p, k](double x, double uo) {
    if (x == p.alpha) {
      return false;
    }
    const auto [s, co] = interval_angle(p, x);
    const double active = k * co * uo;                        // I
    const double target = k * k * p.c * p.c * co * co / s;  // J
    return active < target;
  };

  Compensator min_norm(
      [p, pre_input, constraint_active](const Vector& x) {
        if (!(x(0) > p.alpha - p.beta && x(0) < p.alpha + p.beta)) {
          throw DomainError("interval min-norm compensator is only defined inside the interval");
        }
        const double uo = pre_input(x)(0);
        return scalar_vector(constraint_active(x(0), uo) ? -uo + interval_target_input(p, x(0))
                                                         : 0.0);
      },
      "min-norm interval compensator", "alpha - beta < x < alpha + beta");

  Compensator saturated(
      [p, pre_input, constraint_active](const Vector& x) {
        const double bound = p.input_bound;
        const double uo = pre_input(x)(0);
        const double xv = x(0);
        if (xv <= p.alpha - p.beta) return scalar_vector(-uo + bound);
        if (xv >= p.alpha + p.beta) return scalar_vector(-uo - bound);
        const double target = interval_target_input(p, xv);
        if (target >= bound) return scalar_vector(-uo + bound);
        if (target <= -bound) return scalar_vector(-uo - bound);
        if (constraint_active(xv, uo)) return scalar_vector(-uo + target);
        return scalar_vector(std::clamp(uo, -bound, bound) - uo);
      },
      "input-saturated interval compensator", "R");
  return {std::move(min_norm), std::move(saturated)};
}

}  // namespace scbf
