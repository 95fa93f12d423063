#include "scbf/certificates.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "scbf/errors.hpp"

namespace scbf {
namespace {

struct MarginSample {
  double margin;
  double scale;  // sum of |terms| the margin was formed from
};

double tolerance_for(double scale) { return kMarginAbsTol + kMarginRelTol * scale; }

CertificateReport fold_margins(CertificateKind kind, const PointSet& grid,
                               const std::function<MarginSample(const Vector&)>& sample) {
  if (grid.empty()) {
    throw ParameterError(to_string(kind) + " check needs a non-empty grid");
  }
  CertificateReport report;
  report.kind = kind;
  report.min_margin = std::numeric_limits<double>::infinity();
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& x : grid) {
    const MarginSample s = sample(x);
    if (!std::isfinite(s.margin)) {
      throw DomainError(to_string(kind) + " margin is not finite at a grid point");
    }
    const double tol = tolerance_for(s.scale);
    if (s.margin + tol < worst_slack) {
      worst_slack = s.margin + tol;
      report.worst_margin = s.margin;
      report.tolerance = tol;
      report.worst_point = x;
    }
    report.min_margin = std::min(report.min_margin, s.margin);
  }
  report.points_checked = grid.size();
  report.passed = report.worst_margin >= -report.tolerance;
  return report;
}

void require_positive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be positive and finite");
  }
}

void require_in_chi(const ScalarField& h, const Vector& x) {
  if (!(h.value(x) > 0.0)) {
    throw DomainError("grid point lies outside the safe set (h <= 0)");
  }
}

}  // namespace

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::as_rcbf:
      return "AS_RCBF";
    case CertificateKind::as_zcbf:
      return "AS_ZCBF";
    case CertificateKind::stoch_zcbf:
      return "STOCH_ZCBF";
    case CertificateKind::fiip:
      return "FIIP";
    case CertificateKind::robust_zcbf:
      return "ROBUST_ZCBF";
    case CertificateKind::robust_stoch:
      return "ROBUST_STOCH";
  }
  return "UNKNOWN";
}

nlohmann::json to_json(const CertificateReport& report) {
  nlohmann::json point = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.worst_point.size(); ++i) {
    point.push_back(report.worst_point(i));
  }
  nlohmann::json j{{"kind", to_string(report.kind)},
                   {"passed", report.passed},
                   {"worst_margin", report.worst_margin},
                   {"worst_point", point},
                   {"points_checked", report.points_checked},
                   {"parameters", report.parameters},
                   {"tolerance", report.tolerance},
                   {"min_margin", report.min_margin}};
  if (report.strict) {
    j["strict"] = *report.strict;
  }
  if (!report.notes.empty()) {
    j["notes"] = report.notes;
  }
  return j;
}

CertificateReport check_as_rcbf(const ControlAffineSDE& sys, const Compensator& phi,
                                const ScalarField& reciprocal, double gamma,
                                const PointSet& grid) {
  require_positive("gamma", gamma);
  auto report = fold_margins(CertificateKind::as_rcbf, grid, [&](const Vector& x) {
    const double B = reciprocal.value(x);
    if (!(B > 0.0)) {
      throw DomainError("grid point lies outside the safe set (B <= 0)");
    }
    const GeneratorTerms t = generator_terms(sys, reciprocal, x, phi(x));
    return MarginSample{gamma * B - t.total(), std::abs(gamma * B) + t.magnitude()};
  });
  report.parameters["gamma"] = gamma;
  return report;
}

CertificateReport check_as_zcbf(const ControlAffineSDE& sys, const Compensator& phi,
                                const ScalarField& h, double gamma, const PointSet& grid) {
  require_positive("gamma", gamma);
  const ScalarField reciprocal = reciprocal_field(h);
  auto report = fold_margins(CertificateKind::as_zcbf, grid, [&](const Vector& x) {
    require_in_chi(h, x);
    const double hv = h.value(x);
    const GeneratorTerms t = generator_terms(sys, h, x, phi(x));
    const double ito_b = hv * hv * ito_correction(sys, reciprocal, x);
    const double rhs = -gamma * hv + t.ito + ito_b;
    return MarginSample{t.total() - rhs,
                        t.magnitude() + std::abs(gamma * hv) + std::abs(t.ito) + std::abs(ito_b)};
  });
  report.parameters["gamma"] = gamma;
  return report;
}

CertificateReport check_stochastic_zcbf(const ControlAffineSDE& sys, const Compensator& phi,
                                        const SafeSet& safe, double b, const PointSet& grid,
                                        bool proper_on_rn) {
  require_positive("b", b);
  const ScalarField& h = safe.field();
  auto report = fold_margins(CertificateKind::stoch_zcbf, grid, [&](const Vector& x) {
    if (!safe.in_sublevel(x)) {
      throw DomainError("grid point lies above the mu level (h > mu)");
    }
    const GeneratorTerms t = generator_terms(sys, h, x, phi(x));
    const double bh = b * diffusion_quadratic(sys, h, x);
    return MarginSample{t.total() - bh, t.magnitude() + std::abs(bh)};
  });
  report.strict = report.min_margin > kStrictMargin;
  report.parameters["b"] = b;
  report.parameters["mu"] = safe.mu();
  report.parameters["proper_on_Rn"] = proper_on_rn ? 1.0 : 0.0;
  report.notes.push_back(proper_on_rn ? "properness of h on R^n asserted by caller"
                                      : "properness of h on R^n NOT asserted");
  return report;
}

CertificateReport check_fiip_condition(const ControlAffineSDE& sys, const Compensator& phi,
                                       const ScalarField& Y, double c1, double c2,
                                       const PointSet& grid) {
  if (!(c1 >= 0.0) || !(c2 >= 0.0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw ParameterError("FIiP constants c1, c2 must be finite and non-negative");
  }
  auto report = fold_margins(CertificateKind::fiip, grid, [&](const Vector& x) {
    const double y = Y.value(x);
    if (!(y >= 0.0)) {
      throw DomainError("FIiP function Y is negative at a grid point");
    }
    const GeneratorTerms t = generator_terms(sys, Y, x, phi(x));
    return MarginSample{c1 * y + c2 - t.total(), std::abs(c1 * y) + c2 + t.magnitude()};
  });
  report.parameters["c1"] = c1;
  report.parameters["c2"] = c2;
  return report;
}

CertificateReport check_diffusion_robustness_as(const ScalarField& reciprocal,
                                                const MatrixMap& sigma,
                                                const MatrixMap& sigma_prime,
                                                const PointSet& grid) {
  return fold_margins(CertificateKind::robust_zcbf, grid, [&](const Vector& x) {
    if (!(reciprocal.value(x) > 0.0)) {
      throw DomainError("grid point lies outside the safe set (B <= 0)");
    }
    const double nominal = ito_correction(sigma, reciprocal, x);
    const double perturbed = ito_correction(sigma_prime, reciprocal, x);
    return MarginSample{nominal - perturbed, std::abs(nominal) + std::abs(perturbed)};
  });
}

CertificateReport check_diffusion_robustness_stoch(const ScalarField& h, const MatrixMap& sigma,
                                                   const MatrixMap& sigma_prime, double a,
                                                   const PointSet& grid) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw ParameterError("diffusion scale a must lie in (0, 1]");
  }
  auto report = fold_margins(CertificateKind::robust_stoch, grid, [&](const Vector& x) {
    require_in_chi(h, x);
    const double ito_nominal = ito_correction(sigma, h, x);
    const double ito_perturbed = ito_correction(sigma_prime, h, x);
    const double quad_nominal = a * a * diffusion_quadratic(sigma, h, x);
    const double quad_perturbed = diffusion_quadratic(sigma_prime, h, x);
    const MarginSample ito{ito_perturbed - ito_nominal,
                           std::abs(ito_perturbed) + std::abs(ito_nominal)};
    const MarginSample quad{quad_nominal - quad_perturbed, quad_nominal + quad_perturbed};
    return ito.margin + tolerance_for(ito.scale) < quad.margin + tolerance_for(quad.scale) ? ito
                                                                                           : quad;
  });
  report.parameters["a"] = a;
  return report;
}

double safety_probability_bound(double b, double level) {
  require_positive("b", b);
  require_positive("level", level);
  return -std::expm1(-b * level);
}

double scaled_safety_bound(double b, double mu, double a) {
  require_positive("b", b);
  require_positive("mu", mu);
  if (a == 0.0) {
    return 1.0;
  }
  if (!(a > 0.0 && a <= 1.0)) {
    throw ParameterError("diffusion scale a must lie in [0, 1]");
  }
  return -std::expm1(-b * mu / (a * a));
}

}  // namespace scbf
