#pragma once

#include <functional>
#include <string>

#include "scbf/linalg.hpp"

namespace scbf {

using VectorMap = std::function<Vector(const Vector&)>;
using MatrixMap = std::function<Matrix(const Vector&)>;

/// Control-affine Ito SDE  dx = {f(x) + g(x)(u_o(x) + u)} dt + sigma(x) dw
/// with x in R^n, u in R^m and w a d-dimensional Wiener process.
///
/// Every evaluation checks the returned shape against (n, m, d) and throws
/// DimensionError on mismatch. The maps must be deterministic.
class ControlAffineSDE {
 public:
  ControlAffineSDE(int n, int m, int d, VectorMap drift, MatrixMap input_gain,
                   MatrixMap diffusion, VectorMap pre_input);

  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  int noise_dim() const { return d_; }

  Vector drift(const Vector& x) const;
  Matrix input_gain(const Vector& x) const;
  Matrix diffusion(const Vector& x) const;
  Vector pre_input(const Vector& x) const;

  const MatrixMap& diffusion_map() const { return diffusion_; }

  /// Same plant with sigma replaced (the sigma' system of the robustness results).
  ControlAffineSDE with_diffusion(MatrixMap diffusion) const;
  ControlAffineSDE with_pre_input(VectorMap pre_input) const;

  void check_state(const Vector& x) const;
  void check_input(const Vector& u) const;

 private:
  int n_;
  int m_;
  int d_;
  VectorMap drift_;
  MatrixMap input_gain_;
  MatrixMap diffusion_;
  VectorMap pre_input_;
};

/// A C^2 scalar field with analytic gradient (1 x n) and Hessian (n x n).
///
/// The optional domain predicate restricts where the field may be evaluated
/// (e.g. a reciprocal barrier only exists where h > 0); evaluating outside it
/// throws DomainError.
class ScalarField {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<RowVector(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;
  using DomainFn = std::function<bool(const Vector&)>;

  ScalarField(ValueFn value, GradientFn gradient, HessianFn hessian,
              std::string domain_note = "R^n", DomainFn domain = {});

  /// Field on R from closed forms of y, y' and y''.
  static ScalarField from_scalar(std::function<double(double)> value,
                                 std::function<double(double)> first,
                                 std::function<double(double)> second,
                                 std::string domain_note = "R",
                                 std::function<bool(double)> domain = {});

  double value(const Vector& x) const;
  RowVector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

  bool in_domain(const Vector& x) const { return !domain_ || domain_(x); }
  const std::string& domain_note() const { return domain_note_; }

 private:
  void require_domain(const Vector& x) const;

  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::string domain_note_;
  DomainFn domain_;
};

/// The three pieces of the generator at one point. Kept separate so callers
/// can bound the roundoff of sums built from them.
struct GeneratorTerms {
  double along_drift = 0.0;  // (L_f y)(x)
  double along_input = 0.0;  // (L_g y)(x) (u + u_o(x))
  double ito = 0.0;          // L^I_sigma(y(x))

  double drift_lie() const { return along_drift + along_input; }
  double total() const { return along_drift + along_input + ito; }
  double magnitude() const;
};

GeneratorTerms generator_terms(const ControlAffineSDE& sys, const ScalarField& y,
                               const Vector& x, const Vector& u);

/// L^D_{f,g}(u, u_o(x), y(x)) = L_f y + L_g y (u + u_o(x)).
double drift_lie_derivative(const ControlAffineSDE& sys, const ScalarField& y, const Vector& x,
                            const Vector& u);

/// L^I_sigma(y(x)) = 1/2 tr[sigma sigma^T Hess y].
double ito_correction(const ControlAffineSDE& sys, const ScalarField& y, const Vector& x);
double ito_correction(const MatrixMap& sigma, const ScalarField& y, const Vector& x);

/// Generator of the closed loop: drift_lie_derivative + ito_correction.
double generator(const ControlAffineSDE& sys, const ScalarField& y, const Vector& x,
                 const Vector& u);

/// H_sigma(h(x)) = 1/2 (L_sigma h)(L_sigma h)^T, never negative.
double diffusion_quadratic(const ControlAffineSDE& sys, const ScalarField& h, const Vector& x);
double diffusion_quadratic(const MatrixMap& sigma, const ScalarField& h, const Vector& x);

/// B = 1/h restricted to {h > 0}.
ScalarField reciprocal_field(const ScalarField& h);

struct ExponentialFields {
  ScalarField growth;  // h_b = exp(b h)
  ScalarField decay;   // B_b = exp(-b h) = 1 / h_b
};

/// Exponential barrier pair used by the stochastic ZCBF; b must be positive.
ExponentialFields exponential_fields(const ScalarField& h, double b);

}  // namespace scbf
