#pragma once

// CSV emission for sweep artifacts, full double precision.

#include <sstream>
#include <string>
#include <vector>

#include "headcirc/validation.hpp"

namespace headcirc {

inline std::string sweep_csv(const SweepResult& sweep,
                             const std::vector<int>* terms_used = nullptr) {
  std::ostringstream os;
  os.precision(17);
  os << std::scientific;
  os << "frequency_hz,v_real,v_imag,v_abs";
  if (terms_used) os << ",terms_used";
  os << "\n";
  for (std::size_t i = 0; i < sweep.freqs.size(); ++i) {
    os << sweep.freqs[i] << "," << sweep.values[i].real() << ","
       << sweep.values[i].imag() << "," << std::abs(sweep.values[i]);
    if (terms_used) os << "," << (*terms_used)[i];
    os << "\n";
  }
  return os.str();
}

inline std::string mrfe_grid_csv(const MrfeGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << std::scientific;
  os << "eta,t_skull_mm,mrfe\n";
  for (std::size_t ie = 0; ie < grid.etas.size(); ++ie)
    for (std::size_t it = 0; it < grid.t_skull.size(); ++it)
      os << grid.etas[ie] << "," << grid.t_skull[it] * 1e3 << ","
         << grid.values[ie][it] << "\n";
  return os.str();
}

inline std::string fit_report_csv(const SweepSamples& samples,
                                  const PolyFit& fit) {
  std::ostringstream os;
  os.precision(17);
  os << std::scientific;
  os << "abscissa,optimized_value,fit_value,residual\n";
  for (std::size_t i = 0; i < samples.xs.size(); ++i) {
    const double fv = fit.eval(samples.xs[i]);
    os << samples.xs[i] << "," << samples.ys[i] << "," << fv << ","
       << (fv - samples.ys[i]) << "\n";
  }
  return os.str();
}

}  // namespace headcirc
