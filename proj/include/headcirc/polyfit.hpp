#pragma once

// Ordinary least-squares polynomial fitting on the Vandermonde system,
// solved by Householder QR.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "headcirc/errors.hpp"

namespace headcirc {

struct PolyFit {
  int degree = 0;
  std::vector<double> coeffs;  // ascending power
  double domain_lo = 0.0;
  double domain_hi = 0.0;
  double rmse = 0.0;

  double eval(double x) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
  }
};

namespace detail {

// Householder QR least squares for an m x n system (m >= n), in place.
inline std::vector<double> qr_least_squares(std::vector<std::vector<double>> a,
                                            std::vector<double> b) {
  const std::size_t m = a.size();
  const std::size_t n = a.front().size();
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += a[i][k] * a[i][k];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw FitError("polyfit: rank-deficient Vandermonde system");
    if (a[k][k] > 0.0) norm = -norm;
    for (std::size_t i = k; i < m; ++i) a[i][k] /= norm;
    a[k][k] -= 1.0;
    for (std::size_t j = k + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += a[i][k] * a[i][j];
      s /= a[k][k];
      for (std::size_t i = k; i < m; ++i) a[i][j] += s * a[i][k];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += a[i][k] * b[i];
    s /= a[k][k];
    for (std::size_t i = k; i < m; ++i) b[i] += s * a[i][k];
    a[k][k] = norm;  // store R diagonal
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    if (std::abs(a[r][r]) < 1e3 * std::numeric_limits<double>::epsilon())
      throw FitError("polyfit: rank-deficient Vandermonde system");
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace detail

inline PolyFit polyfit(const std::vector<double>& xs,
                       const std::vector<double>& ys, int degree) {
  if (degree < 0) throw FitError("polyfit: degree must be >= 0");
  const std::size_t n = static_cast<std::size_t>(degree) + 1;
  if (xs.size() != ys.size() || xs.size() < n)
    throw FitError("polyfit: need at least degree+1 samples");
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (xs[i] == xs[j]) throw FitError("polyfit: duplicate abscissae");

  std::vector<std::vector<double>> v(xs.size(), std::vector<double>(n));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      v[i][j] = p;
      p *= xs[i];
    }
  }
  PolyFit fit;
  fit.degree = degree;
  fit.coeffs = detail::qr_least_squares(v, ys);
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  fit.domain_lo = *lo;
  fit.domain_hi = *hi;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = fit.eval(xs[i]) - ys[i];
    ss += r * r;
  }
  fit.rmse = std::sqrt(ss / static_cast<double>(xs.size()));
  return fit;
}

}  // namespace headcirc
