#include "scbf/binomial.hpp"

#include <boost/math/special_functions/beta.hpp>

#include "scbf/errors.hpp"

namespace scbf {

ProbabilityInterval clopper_pearson(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw ParameterError("binomial interval needs at least one trial");
  if (successes > trials) throw ParameterError("binomial interval: successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ParameterError("binomial interval: confidence must lie in (0, 1)");
  }
  const double tail = 0.5 * (1.0 - confidence);
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);
  ProbabilityInterval out;
  out.low = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, tail);
  out.high = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - tail);
  return out;
}

}  // namespace scbf
