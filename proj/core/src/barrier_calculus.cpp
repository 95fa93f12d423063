#include "scbf/barrier_calculus.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "scbf/errors.hpp"

namespace scbf {
namespace {

std::string shape_message(const char* what, long rows, long cols, long want_rows,
                          long want_cols) {
  std::ostringstream os;
  os << what << " has shape " << rows << "x" << cols << ", expected " << want_rows << "x"
     << want_cols;
  return os.str();
}

void require_shape(const char* what, const Matrix& mat, int rows, int cols) {
  if (mat.rows() != rows || mat.cols() != cols) {
    throw DimensionError(shape_message(what, mat.rows(), mat.cols(), rows, cols));
  }
}

void require_length(const char* what, const Vector& v, int len) {
  if (v.size() != len) {
    throw DimensionError(shape_message(what, v.size(), 1, len, 1));
  }
}

std::string point_string(const Vector& x) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    os << (i ? ", " : "") << x(i);
  }
  os << "]";
  return os.str();
}

}  // namespace

ControlAffineSDE::ControlAffineSDE(int n, int m, int d, VectorMap drift, MatrixMap input_gain,
                                   MatrixMap diffusion, VectorMap pre_input)
    : n_(n),
      m_(m),
      d_(d),
      drift_(std::move(drift)),
      input_gain_(std::move(input_gain)),
      diffusion_(std::move(diffusion)),
      pre_input_(std::move(pre_input)) {
  for (int dim : {n, m, d}) {
    if (dim < 1 || dim > kMaxDim) {
      throw DimensionError("system dimensions must lie in [1, " + std::to_string(kMaxDim) + "]");
    }
  }
  if (!drift_ || !input_gain_ || !diffusion_ || !pre_input_) {
    throw ParameterError("control-affine system needs f, g, sigma and u_o");
  }
}

void ControlAffineSDE::check_state(const Vector& x) const { require_length("state", x, n_); }

void ControlAffineSDE::check_input(const Vector& u) const { require_length("input", u, m_); }

Vector ControlAffineSDE::drift(const Vector& x) const {
  check_state(x);
  Vector out = drift_(x);
  require_length("f(x)", out, n_);
  return out;
}

Matrix ControlAffineSDE::input_gain(const Vector& x) const {
  check_state(x);
  Matrix out = input_gain_(x);
  require_shape("g(x)", out, n_, m_);
  return out;
}

Matrix ControlAffineSDE::diffusion(const Vector& x) const {
  check_state(x);
  Matrix out = diffusion_(x);
  require_shape("sigma(x)", out, n_, d_);
  return out;
}

Vector ControlAffineSDE::pre_input(const Vector& x) const {
  check_state(x);
  Vector out = pre_input_(x);
  require_length("u_o(x)", out, m_);
  return out;
}

ControlAffineSDE ControlAffineSDE::with_diffusion(MatrixMap diffusion) const {
  return {n_, m_, d_, drift_, input_gain_, std::move(diffusion), pre_input_};
}

ControlAffineSDE ControlAffineSDE::with_pre_input(VectorMap pre_input) const {
  return {n_, m_, d_, drift_, input_gain_, diffusion_, std::move(pre_input)};
}

ScalarField::ScalarField(ValueFn value, GradientFn gradient, HessianFn hessian,
                         std::string domain_note, DomainFn domain)
    : value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      domain_note_(std::move(domain_note)),
      domain_(std::move(domain)) {
  if (!value_ || !gradient_ || !hessian_) {
    throw ParameterError("scalar field needs value, gradient and Hessian");
  }
}

ScalarField ScalarField::from_scalar(std::function<double(double)> value,
                                     std::function<double(double)> first,
                                     std::function<double(double)> second,
                                     std::string domain_note,
                                     std::function<bool(double)> domain) {
  DomainFn dom;
  if (domain) {
    dom = [domain](const Vector& x) { return domain(x(0)); };
  }
  return ScalarField(
      [value](const Vector& x) { return value(x(0)); },
      [first](const Vector& x) {
        RowVector g(1);
        g(0) = first(x(0));
        return g;
      },
      [second](const Vector& x) { return scalar_matrix(second(x(0))); }, std::move(domain_note),
      std::move(dom));
}

void ScalarField::require_domain(const Vector& x) const {
  if (!in_domain(x)) {
    throw DomainError("point " + point_string(x) + " is outside the field's domain (" +
                      domain_note_ + ")");
  }
}

double ScalarField::value(const Vector& x) const {
  require_domain(x);
  return value_(x);
}

RowVector ScalarField::gradient(const Vector& x) const {
  require_domain(x);
  RowVector g = gradient_(x);
  require_length("gradient", g.transpose(), static_cast<int>(x.size()));
  return g;
}

Matrix ScalarField::hessian(const Vector& x) const {
  require_domain(x);
  Matrix hess = hessian_(x);
  require_shape("Hessian", hess, static_cast<int>(x.size()), static_cast<int>(x.size()));
  return hess;
}

double GeneratorTerms::magnitude() const {
  return std::abs(along_drift) + std::abs(along_input) + std::abs(ito);
}

GeneratorTerms generator_terms(const ControlAffineSDE& sys, const ScalarField& y,
                               const Vector& x, const Vector& u) {
  sys.check_input(u);
  const RowVector grad = y.gradient(x);
  GeneratorTerms terms;
  terms.along_drift = (grad * sys.drift(x)).value();
  terms.along_input = (grad * (sys.input_gain(x) * (u + sys.pre_input(x)))).value();
  terms.ito = ito_correction(sys, y, x);
  return terms;
}

double drift_lie_derivative(const ControlAffineSDE& sys, const ScalarField& y, const Vector& x,
                            const Vector& u) {
  sys.check_input(u);
  const RowVector grad = y.gradient(x);
  return (grad * sys.drift(x)).value() +
         (grad * (sys.input_gain(x) * (u + sys.pre_input(x)))).value();
}

double ito_correction(const ControlAffineSDE& sys, const ScalarField& y, const Vector& x) {
  const Matrix sigma = sys.diffusion(x);
  return 0.5 * (sigma * sigma.transpose() * y.hessian(x)).trace();
}

double ito_correction(const MatrixMap& sigma_map, const ScalarField& y, const Vector& x) {
  const Matrix sigma = sigma_map(x);
  if (sigma.rows() != x.size()) {
    throw DimensionError(shape_message("sigma(x)", sigma.rows(), sigma.cols(), x.size(),
                                       sigma.cols()));
  }
  return 0.5 * (sigma * sigma.transpose() * y.hessian(x)).trace();
}

double generator(const ControlAffineSDE& sys, const ScalarField& y, const Vector& x,
                 const Vector& u) {
  return drift_lie_derivative(sys, y, x, u) + ito_correction(sys, y, x);
}

double diffusion_quadratic(const ControlAffineSDE& sys, const ScalarField& h, const Vector& x) {
  const RowVector sens = h.gradient(x) * sys.diffusion(x);
  return 0.5 * sens.squaredNorm();
}

double diffusion_quadratic(const MatrixMap& sigma_map, const ScalarField& h, const Vector& x) {
  const Matrix sigma = sigma_map(x);
  if (sigma.rows() != x.size()) {
    throw DimensionError(shape_message("sigma(x)", sigma.rows(), sigma.cols(), x.size(),
                                       sigma.cols()));
  }
  const RowVector sens = h.gradient(x) * sigma;
  return 0.5 * sens.squaredNorm();
}

ScalarField reciprocal_field(const ScalarField& h) {
  auto positive = [h](const Vector& x) { return h.in_domain(x) && h.value(x) > 0.0; };
  return ScalarField(
      [h](const Vector& x) { return 1.0 / h.value(x); },
      [h](const Vector& x) {
        const double v = h.value(x);
        return RowVector(-h.gradient(x) / (v * v));
      },
      [h](const Vector& x) {
        const double v = h.value(x);
        const RowVector g = h.gradient(x);
        return Matrix(2.0 / (v * v * v) * (g.transpose() * g) - h.hessian(x) / (v * v));
      },
      "h > 0 (reciprocal of a field with domain " + h.domain_note() + ")", positive);
}

ExponentialFields exponential_fields(const ScalarField& h, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw ParameterError("exponential barrier rate b must be positive and finite");
  }
  auto make = [h](double rate) {
    auto domain = [h](const Vector& x) { return h.in_domain(x); };
    return ScalarField(
        [h, rate](const Vector& x) { return std::exp(rate * h.value(x)); },
        [h, rate](const Vector& x) {
          return RowVector(rate * std::exp(rate * h.value(x)) * h.gradient(x));
        },
        [h, rate](const Vector& x) {
          const RowVector g = h.gradient(x);
          return Matrix(rate * std::exp(rate * h.value(x)) *
                        (rate * (g.transpose() * g) + h.hessian(x)));
        },
        h.domain_note(), domain);
  };
  return {make(b), make(-b)};
}

}  // namespace scbf
