#pragma once

// Derivative-free local minimizers: Nelder-Mead simplex with standard
// coefficients and a golden-section scalar search for unimodal objectives.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace headcirc {

struct SimplexOptions {
  double diameter_tol = 1e-10;  // relative simplex diameter
  double objective_tol = 0.0;   // stop early once below, 0 disables
  int max_iterations = 40000;
  double initial_step = 0.25;
};

struct SimplexResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;  // diameter criterion met (or objective_tol hit)
};

inline SimplexResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const SimplexOptions& opt = {}) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i)
    pts[i + 1][i] += (x0[i] != 0.0) ? opt.initial_step * std::abs(x0[i])
                                    : opt.initial_step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

  SimplexResult res;
  std::vector<std::size_t> order(n + 1);
  for (res.iterations = 0; res.iterations < opt.max_iterations;
       ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[n],
                      second = order[n - 1];

    double diam = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double lo = pts[0][i], hi = pts[0][i];
      for (std::size_t k = 1; k <= n; ++k) {
        lo = std::min(lo, pts[k][i]);
        hi = std::max(hi, pts[k][i]);
      }
      diam = std::max(diam, hi - lo);
      scale = std::max(scale, std::max(std::abs(lo), std::abs(hi)));
    }
    if (diam <= opt.diameter_tol * std::max(1.0, scale)) {
      res.converged = true;
      break;
    }
    if (opt.objective_tol > 0.0 && fv[best] < opt.objective_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i)
        p[i] = centroid[i] + t * (pts[worst][i] - centroid[i]);
      return p;
    };

    const auto refl = blend(-1.0);
    const double f_refl = f(refl);
    if (f_refl < fv[order[0]]) {
      const auto expd = blend(-2.0);
      const double f_expd = f(expd);
      if (f_expd < f_refl) {
        pts[worst] = expd;
        fv[worst] = f_expd;
      } else {
        pts[worst] = refl;
        fv[worst] = f_refl;
      }
      continue;
    }
    if (f_refl < fv[second]) {
      pts[worst] = refl;
      fv[worst] = f_refl;
      continue;
    }
    const auto ctr = blend(f_refl < fv[worst] ? -0.5 : 0.5);
    const double f_ctr = f(ctr);
    if (f_ctr < std::min(f_refl, fv[worst])) {
      pts[worst] = ctr;
      fv[worst] = f_ctr;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {  // shrink toward best
      if (k == best) continue;
      for (std::size_t i = 0; i < n; ++i)
        pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
      fv[k] = f(pts[k]);
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k <= n; ++k)
    if (fv[k] < fv[best]) best = k;
  res.x = pts[best];
  res.fx = fv[best];
  return res;
}

// Golden-section minimization on [lo, hi] for a unimodal objective.
inline double golden_section(const std::function<double(double)>& f, double lo,
                             double hi, double xtol = 1e-13,
                             int max_iter = 400) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return (fc < fd) ? c : d;
}

}  // namespace headcirc
