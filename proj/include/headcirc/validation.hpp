#pragma once

// Quantitative comparison harness: mean relative frequency error between
// circuit and semi-analytical sweeps, the eccentricity / skull-thickness
// error grid, and the dispersion / displacement-current ablation study.

#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "headcirc/calibration.hpp"
#include "headcirc/circuit.hpp"
#include "headcirc/ssh.hpp"
#include "headcirc/sweep.hpp"

namespace headcirc {

struct SweepResult {
  std::vector<double> freqs;
  std::vector<std::complex<double>> values;
  std::string label;
  std::string provenance;  // "ssh" or "circuit" plus config hash
};

enum class AblationCase {
  ohmic_nondispersive,  // sigma frozen at the anchor frequency, eps = 0
  dispersive_r_only,    // sigma(w), eps = 0
  dispersive_rc         // full sigma_c(w)
};

inline const char* ablation_case_name(AblationCase c) {
  switch (c) {
    case AblationCase::ohmic_nondispersive: return "ohmic_nondispersive";
    case AblationCase::dispersive_r_only: return "dispersive_R_only";
    case AblationCase::dispersive_rc: return "dispersive_RC";
  }
  return "?";
}

inline double mrfe(const SweepResult& circuit, const SweepResult& ssh) {
  if (circuit.freqs != ssh.freqs)
    throw InputError("mrfe: frequency grids differ");
  if (circuit.freqs.empty()) throw InputError("mrfe: empty sweeps");
  double acc = 0.0;
  for (std::size_t i = 0; i < ssh.values.size(); ++i) {
    if (std::abs(ssh.values[i]) == 0.0)
      throw InputError("mrfe: reference value is zero at frequency " +
                       std::to_string(ssh.freqs[i]));
    acc += std::abs((circuit.values[i] - ssh.values[i]) / ssh.values[i]);
  }
  return acc / static_cast<double>(ssh.values.size());
}

inline SweepResult ssh_frequency_sweep(const HeadGeometry& geom,
                                       const DipoleSource& dip,
                                       const std::shared_ptr<const TissueSet>& tissues,
                                       const std::vector<double>& freqs,
                                       const SSHConfig& cfg = {},
                                       unsigned threads = 1,
                                       std::vector<int>* terms_used = nullptr) {
  SweepResult out;
  out.freqs = freqs;
  out.values.resize(freqs.size());
  out.label = "ssh";
  out.provenance = "ssh";
  if (terms_used) terms_used->resize(freqs.size());
  parallel_for(freqs.size(), threads, [&](std::size_t i) {
    SeriesInfo info;
    try {
      out.values[i] = scalp_potential(geom, dip, *tissues, freqs[i], cfg, &info);
    } catch (const std::exception& e) {
      throw SweepError("ssh sweep at " + std::to_string(freqs[i]) + " Hz: " +
                       e.what());
    }
    if (terms_used) (*terms_used)[i] = info.terms_used;
  });
  return out;
}

inline SweepResult circuit_frequency_sweep(const Netlist& net,
                                           const std::vector<double>& freqs,
                                           unsigned threads = 1) {
  SweepResult out;
  out.freqs = freqs;
  out.values.resize(freqs.size());
  out.label = "circuit";
  out.provenance = "circuit";
  parallel_for(freqs.size(), threads, [&](std::size_t i) {
    try {
      out.values[i] = solve_nodal(net, freqs[i]).at(net.probe_node());
    } catch (const std::exception& e) {
      throw SweepError("circuit sweep at " + std::to_string(freqs[i]) +
                       " Hz: " + e.what());
    }
  });
  return out;
}

struct MrfeGrid {
  std::vector<double> etas;
  std::vector<double> t_skull;              // m
  std::vector<std::vector<double>> values;  // [eta][t_skull]
};

inline std::vector<double> default_eta_list() {
  return {0.233, 0.465, 0.814, 0.930, 0.966};
}

// 4.6-8.2 mm in 0.4 mm steps, plus the standard 5.9 mm column.
inline std::vector<double> default_t_skull_list() {
  std::vector<double> out;
  for (int i = 0; i <= 9; ++i) out.push_back((4.6 + 0.4 * i) * 1e-3);
  out.insert(out.begin() + 4, 5.9e-3);
  return out;
}

inline MrfeGrid mrfe_grid(const FittedModel& model,
                          const std::shared_ptr<const TissueSet>& tissues,
                          const std::vector<double>& etas,
                          const std::vector<double>& t_skull_list,
                          const FrequencyGrid& grid = {},
                          const SSHConfig& ssh_cfg = {}, double p_r = 15e-9,
                          double dipole_len = 1e-3, unsigned threads = 1) {
  MrfeGrid out;
  out.etas = etas;
  out.t_skull = t_skull_list;
  out.values.assign(etas.size(), std::vector<double>(t_skull_list.size(), 0.0));
  const std::vector<double> freqs = grid.values();
  const std::size_t n = etas.size() * t_skull_list.size();
  std::vector<std::string> failures(n);

  parallel_for(n, threads, [&](std::size_t idx) {
    const std::size_t ie = idx / t_skull_list.size();
    const std::size_t it = idx % t_skull_list.size();
    try {
      const HeadGeometry geom =
          model.geom_ref.with_skull_thickness(t_skull_list[it]);
      const DipoleSource dip(etas[ie] * geom.r_brain, p_r, dipole_len);
      const SweepResult vs =
          ssh_frequency_sweep(geom, dip, tissues, freqs, ssh_cfg);
      const Netlist net = fitted_netlist(model, geom, dip, tissues);
      const SweepResult vc = circuit_frequency_sweep(net, freqs);
      out.values[ie][it] = mrfe(vc, vs);
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    if (!failures[i].empty())
      throw SweepError("mrfe grid cell " + std::to_string(i) + ": " +
                       failures[i]);
  return out;
}

namespace detail {

inline TissueSpectrum freeze_sigma(const TissueSpectrum& t, double anchor_hz) {
  const TissueSample s = t.at(anchor_hz);
  return TissueSpectrum::constant(t.name(), s.sigma, 0.0, anchor_hz);
}

inline TissueSpectrum drop_permittivity(const TissueSpectrum& t) {
  std::vector<TissueSample> samples = t.samples();
  for (auto& s : samples) s.eps_rel = 0.0;
  return TissueSpectrum(t.name(), std::move(samples));
}

}  // namespace detail

// Tissue set as seen by each ablation case. The ohmic case anchors sigma at
// the lowest tabulated frequency unless overridden.
inline std::shared_ptr<const TissueSet> ablation_tissues(
    const TissueSet& full, AblationCase c, double anchor_hz = 0.0) {
  switch (c) {
    case AblationCase::dispersive_rc:
      return std::make_shared<const TissueSet>(full);
    case AblationCase::dispersive_r_only:
      return std::make_shared<const TissueSet>(TissueSet{
          detail::drop_permittivity(full.brain),
          detail::drop_permittivity(full.skull),
          detail::drop_permittivity(full.scalp),
          detail::drop_permittivity(full.air)});
    case AblationCase::ohmic_nondispersive: {
      const double anchor =
          (anchor_hz > 0.0) ? anchor_hz : full.brain.min_frequency();
      return std::make_shared<const TissueSet>(
          TissueSet{detail::freeze_sigma(full.brain, anchor),
                    detail::freeze_sigma(full.skull, anchor),
                    detail::freeze_sigma(full.scalp, anchor),
                    detail::freeze_sigma(full.air, anchor)});
    }
  }
  throw InputError("ablation: unknown case");
}

struct AblationStudy {
  SweepResult cases[3];                       // indexed by AblationCase
  std::vector<std::vector<double>> rel_error; // |V_case / V_iii - 1| per case
  bool degenerate = false;  // input tables were non-dispersive
};

inline AblationStudy ablation_study(const FittedModel& model,
                                    const HeadGeometry& geom,
                                    const DipoleSource& dip,
                                    const std::shared_ptr<const TissueSet>& tissues,
                                    const FrequencyGrid& grid = {},
                                    double anchor_hz = 0.0,
                                    unsigned threads = 1,
                                    const WarningSink& warn = {}) {
  AblationStudy study;
  if (!tissues->dispersive()) {
    study.degenerate = true;
    if (warn)
      warn("ablation: tissue tables are non-dispersive, cases (i) and (ii) "
           "coincide");
  }
  const std::vector<double> freqs = grid.values();
  for (int c = 0; c < 3; ++c) {
    const auto case_tissues =
        ablation_tissues(*tissues, static_cast<AblationCase>(c), anchor_hz);
    const Netlist net = fitted_netlist(model, geom, dip, case_tissues);
    study.cases[c] = circuit_frequency_sweep(net, freqs, threads);
    study.cases[c].label = ablation_case_name(static_cast<AblationCase>(c));
  }
  study.rel_error.assign(3, std::vector<double>(freqs.size(), 0.0));
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < freqs.size(); ++i)
      study.rel_error[c][i] =
          std::abs(study.cases[c].values[i] / study.cases[2].values[i] - 1.0);
  return study;
}

}  // namespace headcirc
