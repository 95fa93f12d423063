#include "scbf/rng.hpp"

#include <cmath>
#include <numbers>

namespace scbf {

namespace {

std::seed_seq make_seed(std::uint64_t master, std::uint64_t index) {
  return std::seed_seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                       static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
}

}  // namespace

PathRng::PathRng(std::uint64_t master_seed, std::uint64_t path_index) {
  auto seq = make_seed(master_seed, path_index);
  engine_.seed(seq);
}

double PathRng::uniform() {
  constexpr double kScale = 0x1.0p-53;
  return 1.0 - static_cast<double>(engine_() >> 11) * kScale;
}

double PathRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

}  // namespace scbf
