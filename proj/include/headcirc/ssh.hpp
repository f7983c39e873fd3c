#pragma once

// Semi-analytical scalp-potential series for a radial dipole in the
// three-shell spherical head, evaluated with complex layer conductivities.
// The air conductivity is factored out of the harmonic coefficients
// analytically, so an exact insulator (sigma_air = 0) is well defined.

#include <cmath>
#include <complex>
#include <sstream>

#include "headcirc/geometry.hpp"
#include "headcirc/tissue.hpp"

namespace headcirc {

struct SSHConfig {
  double rel_tol = 1e-12;
  int l_max = 2000;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
      throw ValidationError("ssh: rel_tol must be in (0, 1)");
    if (l_max < 1) throw ValidationError("ssh: l_max must be >= 1");
  }
};

// Complex conductivities indexed 1 = brain, 2 = skull, 3 = scalp, 4 = air.
struct LayerConductivities {
  std::complex<double> brain;
  std::complex<double> skull;
  std::complex<double> scalp;
  std::complex<double> air;
};

inline LayerConductivities layer_conductivities(const TissueSet& ts, double f,
                                                const WarningSink& warn = {}) {
  return {ts.brain.complex_conductivity(f, warn).value,
          ts.skull.complex_conductivity(f, warn).value,
          ts.scalp.complex_conductivity(f, warn).value,
          ts.air.complex_conductivity(f, warn).value};
}

// A4(l)/sigma_air with the air conductivity cancelled against the numerator.
// The remaining air dependence enters only through the difference and
// weighted-sum terms, which stay finite as sigma_air -> 0.
inline std::complex<double> coefficient_over_sigma4(int l,
                                                    const LayerConductivities& lc,
                                                    const GeometryRatios& gr) {
  using C = std::complex<double>;
  if (l < 1) throw DomainError("ssh: harmonic degree must be >= 1");
  const double ld = static_cast<double>(l);
  const C s1 = lc.brain, s2 = lc.skull, s3 = lc.scalp, s4 = lc.air;
  auto diff = [](C a, C b) { return a - b; };
  auto wsum = [ld](C a, C b) { return (ld + 1.0) * a + ld * b; };
  const C x1 = wsum(s2, s1) * diff(s3, s2) * diff(s4, s3);
  const C x2 = diff(s2, s1) * wsum(s2, s3) * diff(s4, s3);
  const C x3 = diff(s2, s1) * diff(s3, s2) * wsum(s4, s3);
  const C x123 = wsum(s2, s1) * wsum(s3, s2) * wsum(s4, s3);
  const double two_l1 = 2.0 * ld + 1.0;
  const C numerator = ld * two_l1 * two_l1 * two_l1 * s2 * s3 *
                      std::pow(gr.eta, ld - 1.0);
  const C denominator =
      ld * (ld + 1.0) * (gr.psi_23 * x1 + gr.psi_13 * x2 + gr.psi_12 * x3) +
      x123;
  const double num_scale = two_l1 * two_l1 * two_l1 *
                           std::abs(s2) * std::abs(s3) * std::abs(wsum(s4, s3));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (std::abs(denominator) == 0.0 ||
      std::abs(denominator) < 1e3 * eps * num_scale) {
    std::ostringstream os;
    os << "ssh: degenerate layer conductivities, coefficient denominator "
          "vanishes at l = " << l;
    throw DegenerateConductivityError(os.str());
  }
  return numerator / denominator;
}

struct SeriesInfo {
  int terms_used = 0;
  int nonzero_terms = 0;
  double residual_estimate = 0.0;  // |last term| / |sum|
  bool converged = false;
};

inline std::complex<double> scalp_potential_series(
    const LayerConductivities& lc, const GeometryRatios& gr, double r_scalp,
    double p_r, const SSHConfig& cfg, SeriesInfo* info = nullptr) {
  cfg.validate();
  using C = std::complex<double>;
  C sum = 0.0;
  int consecutive = 0;
  SeriesInfo local;
  for (int l = 1; l <= cfg.l_max; ++l) {
    const C term = coefficient_over_sigma4(l, lc, gr);
    sum += term;
    ++local.terms_used;
    if (std::abs(term) > 0.0) ++local.nonzero_terms;
    local.residual_estimate =
        (std::abs(sum) > 0.0) ? std::abs(term) / std::abs(sum) : 0.0;
    if (std::abs(term) < cfg.rel_tol * std::abs(sum))
      ++consecutive;
    else
      consecutive = 0;
    if (consecutive >= 3) {
      local.converged = true;
      break;
    }
  }
  const C v = p_r / (4.0 * M_PI * r_scalp * r_scalp) * sum;
  if (info) *info = local;
  if (!local.converged && p_r != 0.0) {
    std::ostringstream os;
    os << "ssh: series not converged after " << local.terms_used
       << " terms (residual estimate " << local.residual_estimate
       << "), partial |V| = " << std::abs(v);
    throw TruncationError(os.str());
  }
  return v;
}

inline std::complex<double> scalp_potential(const HeadGeometry& geom,
                                            const DipoleSource& dip,
                                            const TissueSet& tissues, double f,
                                            const SSHConfig& cfg = {},
                                            SeriesInfo* info = nullptr,
                                            const WarningSink& warn = {}) {
  if (!(f > 0.0)) throw DomainError("ssh: frequency must be > 0");
  const GeometryRatios gr = ratios(geom, dip);
  const LayerConductivities lc = layer_conductivities(tissues, f, warn);
  if (dip.p_r == 0.0) {
    if (info) *info = SeriesInfo{0, 0, 0.0, true};
    return 0.0;
  }
  return scalp_potential_series(lc, gr, geom.r_scalp, dip.p_r, cfg, info);
}

}  // namespace headcirc
