#include "scbf/grid.hpp"

#include <cmath>
#include <random>

#include "scbf/errors.hpp"

namespace scbf {

PointSet linspace_points(double lo, double hi, std::size_t count) {
  if (count == 0) {
    throw ParameterError("linspace_points needs at least one point");
  }
  PointSet out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(scalar_vector(lo));
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(scalar_vector(i + 1 == count ? hi : lo + step * static_cast<double>(i)));
  }
  return out;
}

PointSet geometric_points(double boundary, double direction, double min_offset,
                          double max_offset, std::size_t count) {
  if (!(min_offset > 0.0) || !(max_offset >= min_offset) || count == 0) {
    throw ParameterError("geometric_points needs 0 < min_offset <= max_offset and count > 0");
  }
  PointSet out;
  out.reserve(count);
  const double lmin = std::log(min_offset);
  const double lmax = std::log(max_offset);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(scalar_vector(boundary + direction * std::exp(lmin + t * (lmax - lmin))));
  }
  return out;
}

PointSet rectangular_grid(const Vector& lo, const Vector& hi,
                          const std::vector<std::size_t>& counts) {
  const auto dim = static_cast<std::size_t>(lo.size());
  if (hi.size() != lo.size() || counts.size() != dim || dim == 0) {
    throw DimensionError("rectangular_grid bounds and counts disagree");
  }
  std::size_t total = 1;
  for (std::size_t c : counts) {
    if (c == 0) {
      throw ParameterError("rectangular_grid needs a positive count on each axis");
    }
    total *= c;
  }
  PointSet out;
  out.reserve(total);
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Vector p(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      p(e) = counts[i] == 1 ? lo(e)
                            : lo(e) + (hi(e) - lo(e)) * static_cast<double>(idx[i]) /
                                          static_cast<double>(counts[i] - 1);
    }
    out.push_back(p);
    for (std::size_t i = 0; i < dim; ++i) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
  }
  return out;
}

PointSet random_points(const Vector& lo, const Vector& hi, std::size_t count, std::uint64_t seed) {
  if (hi.size() != lo.size()) {
    throw DimensionError("random_points bounds disagree");
  }
  std::mt19937_64 engine(seed);
  PointSet out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Vector p(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
      p(i) = lo(i) + (hi(i) - lo(i)) * u;
    }
    out.push_back(p);
  }
  return out;
}

PointSet filter_points(const PointSet& points, const std::function<bool(const Vector&)>& keep) {
  PointSet out;
  for (const auto& p : points) {
    if (keep(p)) out.push_back(p);
  }
  return out;
}

PointSet concat_points(std::vector<PointSet> parts) {
  PointSet out;
  for (auto& part : parts) {
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace scbf
