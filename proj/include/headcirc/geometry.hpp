#pragma once

// Three-shell spherical head geometry and the radial dipole source.

#include <cmath>

#include "headcirc/errors.hpp"

namespace headcirc {

struct HeadGeometry {
  double r_brain;  // m
  double r_skull;  // m
  double r_scalp;  // m

  HeadGeometry(double rb, double rs, double rc)
      : r_brain(rb), r_skull(rs), r_scalp(rc) {
    if (!(0.0 < rb && rb < rs && rs < rc))
      throw ValidationError("head geometry requires 0 < r_brain < r_skull < r_scalp");
  }

  double t_skull() const { return r_skull - r_brain; }
  double t_scalp() const { return r_scalp - r_skull; }

  // Moves the skull-scalp interface while keeping r_brain and r_scalp fixed.
  HeadGeometry with_skull_thickness(double t) const {
    return HeadGeometry(r_brain, r_brain + t, r_scalp);
  }

  HeadGeometry scaled(double k) const {
    if (!(k > 0.0)) throw ValidationError("scale factor must be > 0");
    return HeadGeometry(k * r_brain, k * r_skull, k * r_scalp);
  }
};

// Canonical geometry: r_brain 7.91 cm, r_skull 8.50 cm, r_scalp 9.20 cm.
inline HeadGeometry standard_geometry() {
  return HeadGeometry(7.91e-2, 8.50e-2, 9.20e-2);
}

struct DipoleSource {
  double r_dip;  // m, radial position
  double p_r;    // A*m, radial dipole moment
  double d;      // m, effective dipole length

  DipoleSource(double r, double p, double len) : r_dip(r), p_r(p), d(len) {
    if (r < 0.0) throw ValidationError("dipole position must be >= 0");
    if (p < 0.0) throw ValidationError("dipole moment must be >= 0");
    if (!(len > 0.0)) throw ValidationError("dipole length must be > 0");
  }

  double i_dip() const { return p_r / d; }
};

struct GeometryRatios {
  double eta;     // r_dip / r_brain
  double psi_12;  // r_brain / r_skull
  double psi_13;  // r_brain / r_scalp
  double psi_23;  // r_skull / r_scalp
};

inline GeometryRatios ratios(const HeadGeometry& g, const DipoleSource& dip) {
  if (!(dip.r_dip < g.r_brain))
    throw ValidationError("dipole must lie inside the brain compartment");
  return {dip.r_dip / g.r_brain, g.r_brain / g.r_skull, g.r_brain / g.r_scalp,
          g.r_skull / g.r_scalp};
}

}  // namespace headcirc
