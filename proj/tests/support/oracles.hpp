#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerics.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "scbf/linalg.hpp"

namespace scbf::oracle {

inline double fd_step(double x) { return 1e-5 * std::max(1.0, std::abs(x)); }

/// Central-difference gradient of a scalar function.
inline RowVector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x) {
  RowVector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x(i));
    Vector xp = x;
    Vector xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Central differences of an analytic gradient.
inline Matrix fd_hessian(const std::function<RowVector(const Vector&)>& grad, const Vector& x) {
  Matrix H(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x(i));
    Vector xp = x;
    Vector xm = x;
    xp(i) += h;
    xm(i) -= h;
    const RowVector d = (grad(xp) - grad(xm)) / (2.0 * h);
    for (Eigen::Index j = 0; j < x.size(); ++j) H(j, i) = d(j);
  }
  return H;
}

/// P[X = k] for X ~ Binomial(n, p), by direct product of factors.
inline double binomial_pmf(int n, int k, double p) {
  double coef = 1.0;
  for (int i = 1; i <= k; ++i) coef = coef * static_cast<double>(n - k + i) / static_cast<double>(i);
  return coef * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

inline double binomial_cdf(int n, int k, double p) {
  double s = 0.0;
  for (int i = 0; i <= k; ++i) s += binomial_pmf(n, i, p);
  return s;
}

inline double binomial_sf(int n, int k, double p) {  // P[X >= k]
  double s = 0.0;
  for (int i = k; i <= n; ++i) s += binomial_pmf(n, i, p);
  return s;
}

/// Root of a monotone function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace scbf::oracle
