#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "scbf/linalg.hpp"

namespace scbf {

using PointSet = std::vector<Vector>;

/// `count` evenly spaced points on [lo, hi] in R (count >= 2, or 1 giving lo).
PointSet linspace_points(double lo, double hi, std::size_t count);

/// Points boundary + direction * d with d geometrically spaced on
/// [min_offset, max_offset]; resolves layers where barriers blow up.
PointSet geometric_points(double boundary, double direction, double min_offset,
                          double max_offset, std::size_t count);

/// Tensor-product grid over the box [lo, hi] with counts[i] points per axis.
PointSet rectangular_grid(const Vector& lo, const Vector& hi, const std::vector<std::size_t>& counts);

/// Uniform random points in the box [lo, hi] (mt19937_64 seeded with `seed`).
PointSet random_points(const Vector& lo, const Vector& hi, std::size_t count, std::uint64_t seed);

PointSet filter_points(const PointSet& points, const std::function<bool(const Vector&)>& keep);

PointSet concat_points(std::vector<PointSet> parts);

}  // namespace scbf
