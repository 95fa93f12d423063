#pragma once

#include <cstdint>
#include <random>

namespace scbf {

/// Independent Gaussian stream for one sample path.
///
/// The stream is a pure function of (master_seed, path_index) and is part of
/// the reproducibility contract, so its construction is fixed:
///   engine   std::mt19937_64 seeded with std::seed_seq{lo32(master_seed),
///            hi32(master_seed), lo32(path_index), hi32(path_index)}
///   uniform  u = 1 - (engine() >> 11) * 2^-53, in (0, 1]
///   normal   Box-Muller on (u1, u2): r = sqrt(-2 ln u1), returns r cos(2 pi u2)
///            and then r sin(2 pi u2) on the next call
/// Both std::mt19937_64 and std::seed_seq have standard-mandated output.
class PathRng {
 public:
  PathRng(std::uint64_t master_seed, std::uint64_t path_index);

  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace scbf
