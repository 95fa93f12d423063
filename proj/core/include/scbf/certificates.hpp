#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scbf/barrier_calculus.hpp"
#include "scbf/compensator.hpp"
#include "scbf/grid.hpp"
#include "scbf/safe_set.hpp"

namespace scbf {

enum class CertificateKind { as_rcbf, as_zcbf, stoch_zcbf, fiip, robust_zcbf, robust_stoch };

std::string to_string(CertificateKind kind);

// A margin passes when margin >= -(kMarginAbsTol + kMarginRelTol * S), where S
// is the sum of magnitudes of the terms that were added to form it.
inline constexpr double kMarginAbsTol = 1e-9;
inline constexpr double kMarginRelTol = 1e-12;
// Strict inequalities need margin > kStrictMargin at every point.
inline constexpr double kStrictMargin = 1e-12;
// Grids inside chi stay at h >= kBoundaryClip; B and phi_N diverge at the boundary.
inline constexpr double kBoundaryClip = 1e-6;

/// Outcome of checking one certificate inequality over a point set.
///
/// worst_point is the evaluated point closest to violating the inequality
/// (smallest margin + tolerance); worst_margin and tolerance are taken there,
/// so passed == (worst_margin >= -tolerance).
struct CertificateReport {
  CertificateKind kind = CertificateKind::as_rcbf;
  bool passed = false;
  double worst_margin = 0.0;
  double tolerance = kMarginAbsTol;
  Vector worst_point;
  std::size_t points_checked = 0;
  double min_margin = 0.0;     // smallest raw margin over all points
  std::optional<bool> strict;  // stochastic ZCBF only: min_margin > kStrictMargin
  std::map<std::string, double> parameters;
  std::vector<std::string> notes;
};

nlohmann::json to_json(const CertificateReport& report);

/// gamma B(x) - L(phi(x), u_o(x), B(x)) >= 0 on a grid inside chi.
CertificateReport check_as_rcbf(const ControlAffineSDE& sys, const Compensator& phi,
                                const ScalarField& reciprocal, double gamma, const PointSet& grid);

/// L(phi, u_o, h) >= -gamma h + L^I(h) + h^2 L^I(1/h) on a grid inside chi.
CertificateReport check_as_zcbf(const ControlAffineSDE& sys, const Compensator& phi,
                                const ScalarField& h, double gamma, const PointSet& grid);

/// L(phi, u_o, h) >= b H_sigma(h) on a grid inside {h <= mu}.
///
/// Properness of h on R^n is not machine-checked; the caller asserts it and
/// the assertion is recorded in the report.
CertificateReport check_stochastic_zcbf(const ControlAffineSDE& sys, const Compensator& phi,
                                        const SafeSet& safe, double b, const PointSet& grid,
                                        bool proper_on_rn = true);

/// L(phi, u_o, Y) <= c1 Y + c2 with Y >= 0 on the grid.
CertificateReport check_fiip_condition(const ControlAffineSDE& sys, const Compensator& phi,
                                       const ScalarField& Y, double c1, double c2,
                                       const PointSet& grid);

/// L^I_sigma(B) >= L^I_sigma'(B) on a grid inside chi.
CertificateReport check_diffusion_robustness_as(const ScalarField& reciprocal,
                                                const MatrixMap& sigma,
                                                const MatrixMap& sigma_prime,
                                                const PointSet& grid);

/// L^I_sigma(h) <= L^I_sigma'(h) and a^2 H_sigma(h) >= H_sigma'(h) on a grid inside chi.
CertificateReport check_diffusion_robustness_stoch(const ScalarField& h, const MatrixMap& sigma,
                                                   const MatrixMap& sigma_prime, double a,
                                                   const PointSet& grid);

/// 1 - exp(-b * level): safety probability from a stochastic ZCBF with
/// level = mu (initial state above the layer) or level = h(x0) (inside it).
double safety_probability_bound(double b, double level);

/// 1 - exp(-b mu / a^2) for the sigma' = a sigma system; a = 0 gives 1.
double scaled_safety_bound(double b, double mu, double a);

}  // namespace scbf
