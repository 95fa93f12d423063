#pragma once

#include <Eigen/Dense>

namespace scbf {

// State, input and noise dimensions are bounded so that vectors live on the
// stack; the Monte Carlo loop evaluates these types ~1e9 times.
inline constexpr int kMaxDim = 8;

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor, 1, kMaxDim>;
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline Vector scalar_vector(double v) {
  Vector out(1);
  out(0) = v;
  return out;
}

inline Matrix scalar_matrix(double v) {
  Matrix out(1, 1);
  out(0, 0) = v;
  return out;
}

}  // namespace scbf
