#include "scbf/compensator.hpp"

namespace scbf {

Compensator zero_compensator(int input_dim) {
  return Compensator([input_dim](const Vector&) { return Vector(Vector::Zero(input_dim)); },
                     "zero", "R^n");
}

}  // namespace scbf
