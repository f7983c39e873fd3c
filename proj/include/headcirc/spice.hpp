#pragma once

// SPICE-compatible netlist export. Each branch becomes a parallel R / C
// pair with values frozen at a reference frequency for dispersive tissues.

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>

#include "headcirc/circuit.hpp"

namespace headcirc {

inline std::string export_spice_netlist(const Netlist& net,
                                        std::optional<double> f_ref) {
  const bool dispersive = net.tissues().dispersive();
  if (dispersive && !f_ref)
    throw ExportError(
        "spice export: dispersive tissues require a freezing frequency");
  const double f = f_ref.value_or(1000.0);
  const double omega = 2.0 * M_PI * f;

  std::ostringstream os;
  os.precision(12);
  const auto& g = net.geometry();
  const auto& p = net.params();
  os << "* three-shell head equivalent circuit\n";
  os << "* geometry: r_brain=" << g.r_brain << " r_skull=" << g.r_skull
     << " r_scalp=" << g.r_scalp << " (m)\n";
  os << "* dipole: r_dip=" << net.dipole().r_dip << " m, p_r="
     << net.dipole().p_r << " A*m, d=" << net.dipole().d << " m\n";
  os << "* params: s_brain=" << p.s_brain << " gamma_brain=" << p.gamma_brain
     << " gamma_skull=" << p.gamma_skull << " gamma_scalp=" << p.gamma_scalp
     << " alpha=" << p.alpha << "\n";
  if (f_ref)
    os << "* element values frozen at f_ref=" << *f_ref << " Hz\n";

  for (const auto& br : net.branches()) {
    const std::complex<double> y =
        br.admittance(f, net.options().impedance_scale);
    const std::string a = node_name(br.node_a);
    const std::string b = node_name(br.node_b);
    const std::string tag = layer_name(br.layer);
    if (y.real() > 0.0)
      os << "R_" << tag << " " << a << " " << b << " " << 1.0 / y.real()
         << "\n";
    if (y.imag() > 0.0)
      os << "C_" << tag << " " << a << " " << b << " " << y.imag() / omega
         << "\n";
  }
  os << "I_DIP GND NSRC AC " << net.source_current() << "\n";
  os << ".end\n";
  return os.str();
}

}  // namespace headcirc
