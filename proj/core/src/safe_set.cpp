#include "scbf/safe_set.hpp"

#include <cmath>

#include "scbf/errors.hpp"

namespace scbf {

SafeSet::SafeSet(ScalarField h, double mu, BoundaryPolicy boundary)
    : h_(std::move(h)), mu_(mu), boundary_(boundary) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ParameterError("safe-set threshold mu must be finite and non-negative");
  }
}

}  // namespace scbf
