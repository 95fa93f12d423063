#pragma once

#include <utility>

#include "scbf/barrier_calculus.hpp"

namespace scbf {

/// Whether the zero level set belongs to the safe set. The stochastic results
/// use the open set {h > 0}; the deterministic motivating problem uses the
/// closed set {h >= 0}.
enum class BoundaryPolicy { open, closed };

/// Safe set chi = {h > 0} with the boundary layer chi_mu = {0 < h <= mu}, the
/// interior chi_{h>mu} = {h > mu} and the sublevel set {h <= mu}.
class SafeSet {
 public:
  explicit SafeSet(ScalarField h, double mu = 0.0, BoundaryPolicy boundary = BoundaryPolicy::open);

  const ScalarField& field() const { return h_; }
  double mu() const { return mu_; }
  BoundaryPolicy boundary() const { return boundary_; }

  bool contains(const Vector& x) const { return safe_level(h_.value(x)); }
  bool in_boundary_layer(const Vector& x) const { return layer_level(h_.value(x)); }
  bool above_layer(const Vector& x) const { return h_.value(x) > mu_; }
  bool in_sublevel(const Vector& x) const { return h_.value(x) <= mu_; }

  // Membership tests on an already evaluated h(x).
  bool safe_level(double h) const {
    return boundary_ == BoundaryPolicy::open ? h > 0.0 : h >= 0.0;
  }
  bool layer_level(double h) const { return safe_level(h) && h <= mu_; }

 private:
  ScalarField h_;
  double mu_;
  BoundaryPolicy boundary_;
};

}  // namespace scbf
