#pragma once

#include <string>
#include <utility>

#include "scbf/barrier_calculus.hpp"

namespace scbf {

/// State feedback u = phi(x) added to the pre-input u_o(x).
class Compensator {
 public:
  Compensator(VectorMap phi, std::string description, std::string validity = "R^n")
      : phi_(std::move(phi)), description_(std::move(description)), validity_(std::move(validity)) {}

  Vector operator()(const Vector& x) const { return phi_(x); }

  const std::string& description() const { return description_; }
  const std::string& validity() const { return validity_; }

 private:
  VectorMap phi_;
  std::string description_;
  std::string validity_;
};

/// Compensator that is identically zero (open loop under u_o).
Compensator zero_compensator(int input_dim);

}  // namespace scbf
