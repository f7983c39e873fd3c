#pragma once

// Run configuration: geometry and dipole blocks with explicit unit
// suffixes, tissue-set manifests, solver options, and atomic artifact
// output.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "headcirc/calibration.hpp"
#include "headcirc/geometry.hpp"
#include "headcirc/ssh.hpp"
#include "headcirc/sweep.hpp"
#include "headcirc/tissue.hpp"

namespace headcirc {

namespace detail {

// Accepts a plain number (SI) or a string with a unit suffix.
inline double parse_quantity(const nlohmann::json& v, const std::string& kind,
                             const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string())
    throw ValidationError("config: " + key + " must be a number or string");
  std::istringstream in(v.get<std::string>());
  double mag = 0.0;
  std::string unit;
  if (!(in >> mag)) throw ValidationError("config: cannot parse " + key);
  in >> unit;
  if (unit.empty()) return mag;
  struct UnitDef { const char* name; const char* kind; double factor; };
  static const UnitDef units[] = {
      {"m", "length", 1.0},       {"cm", "length", 1e-2},
      {"mm", "length", 1e-3},     {"Am", "moment", 1.0},
      {"nAm", "moment", 1e-9},    {"uAm", "moment", 1e-6},
      {"Hz", "frequency", 1.0},   {"kHz", "frequency", 1e3},
  };
  for (const auto& u : units)
    if (unit == u.name) {
      if (kind != u.kind)
        throw ValidationError("config: unit '" + unit + "' not valid for " +
                              key);
      return mag * u.factor;
    }
  throw ValidationError("config: unknown unit '" + unit + "' for " + key);
}

inline TissueSpectrum tissue_from_manifest(const nlohmann::json& entry,
                                           const std::string& name,
                                           const std::filesystem::path& base) {
  if (entry.contains("file")) {
    const std::filesystem::path p =
        base / entry.at("file").get<std::string>();
    std::ifstream in(p);
    if (!in) throw InputError("cannot open tissue table: " + p.string());
    return load_tissue_table(in, name);
  }
  if (entry.contains("sigma"))
    return TissueSpectrum::constant(name, entry.at("sigma").get<double>(),
                                    entry.value("eps_rel", 0.0));
  throw ValidationError("tissue manifest entry '" + name +
                        "' needs 'file' or 'sigma'");
}

}  // namespace detail

inline TissueSet load_tissue_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tissue manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("tissue manifest " + path + ": " + e.what());
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  return TissueSet{
      detail::tissue_from_manifest(j.at("brain"), "brain", base),
      detail::tissue_from_manifest(j.at("skull"), "skull", base),
      detail::tissue_from_manifest(j.at("scalp"), "scalp", base),
      detail::tissue_from_manifest(j.at("air"), "air", base)};
}

struct RunConfig {
  HeadGeometry geometry = standard_geometry();
  DipoleSource dipole{0.0, 15e-9, 1e-3};
  std::string tissue_manifest;
  SSHConfig ssh;
  FrequencyGrid freq_grid;
  OptimizerConfig optimizer;
  std::string output_dir = ".";
  unsigned threads = 1;
  std::optional<double> freeze_at_hz;
  std::optional<std::string> model_path;
  bool include_air_branch = true;
};

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config " + path + ": " + e.what());
  }
  RunConfig cfg;
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    cfg.geometry = HeadGeometry(
        detail::parse_quantity(g.at("r_brain"), "length", "r_brain"),
        detail::parse_quantity(g.at("r_skull"), "length", "r_skull"),
        detail::parse_quantity(g.at("r_scalp"), "length", "r_scalp"));
  }
  if (j.contains("dipole")) {
    const auto& d = j.at("dipole");
    cfg.dipole = DipoleSource(
        detail::parse_quantity(d.at("r_dip"), "length", "r_dip"),
        detail::parse_quantity(d.at("p_r"), "moment", "p_r"),
        detail::parse_quantity(d.at("d"), "length", "d"));
  }
  if (j.contains("tissues"))
    cfg.tissue_manifest = j.at("tissues").get<std::string>();
  if (j.contains("ssh")) {
    cfg.ssh.rel_tol = j.at("ssh").value("rel_tol", cfg.ssh.rel_tol);
    cfg.ssh.l_max = j.at("ssh").value("l_max", cfg.ssh.l_max);
  }
  if (j.contains("frequency_grid")) {
    const auto& f = j.at("frequency_grid");
    cfg.freq_grid.min_hz = f.value("min_hz", cfg.freq_grid.min_hz);
    cfg.freq_grid.max_hz = f.value("max_hz", cfg.freq_grid.max_hz);
    cfg.freq_grid.points = f.value("points", cfg.freq_grid.points);
  }
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    cfg.optimizer.objective_threshold =
        o.value("objective_threshold", cfg.optimizer.objective_threshold);
    cfg.optimizer.restarts = o.value("restarts", cfg.optimizer.restarts);
    cfg.optimizer.max_iterations =
        o.value("max_iterations", cfg.optimizer.max_iterations);
    if (o.contains("seed")) {
      const auto& s = o.at("seed");
      cfg.optimizer.seed.s_brain = s.value("s_brain", cfg.optimizer.seed.s_brain);
      cfg.optimizer.seed.gamma_brain =
          s.value("gamma_brain", cfg.optimizer.seed.gamma_brain);
      cfg.optimizer.seed.gamma_skull =
          s.value("gamma_skull", cfg.optimizer.seed.gamma_skull);
      cfg.optimizer.seed.gamma_scalp =
          s.value("gamma_scalp", cfg.optimizer.seed.gamma_scalp);
    }
  }
  if (j.contains("output_dir"))
    cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
  if (j.contains("include_air_branch"))
    cfg.include_air_branch = j.at("include_air_branch").get<bool>();
  return cfg;
}

// Writes via a temp file in the same directory, then renames.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write: " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace headcirc
