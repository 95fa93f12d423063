#pragma once

#include <cstddef>

namespace scbf {

struct ProbabilityInterval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact (Clopper-Pearson) two-sided interval for a binomial proportion.
ProbabilityInterval clopper_pearson(std::size_t successes, std::size_t trials,
                                    double confidence = 0.99);

}  // namespace scbf
