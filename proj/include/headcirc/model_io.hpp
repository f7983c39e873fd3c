#pragma once

// JSON persistence for the fitted model (schema version 1).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "headcirc/calibration.hpp"

namespace headcirc {

inline constexpr int kModelSchemaVersion = 1;

namespace detail {

inline nlohmann::json fit_to_json(const PolyFit& f, const SweepSamples& s) {
  nlohmann::json j;
  j["degree"] = f.degree;
  j["coeffs"] = f.coeffs;
  j["domain"] = {f.domain_lo, f.domain_hi};
  j["rmse"] = f.rmse;
  j["samples_x"] = s.xs;
  j["samples_y"] = s.ys;
  return j;
}

inline void fit_from_json(const nlohmann::json& j, PolyFit& f,
                          SweepSamples& s) {
  f.degree = j.at("degree").get<int>();
  f.coeffs = j.at("coeffs").get<std::vector<double>>();
  f.domain_lo = j.at("domain")[0].get<double>();
  f.domain_hi = j.at("domain")[1].get<double>();
  f.rmse = j.at("rmse").get<double>();
  s.xs = j.at("samples_x").get<std::vector<double>>();
  s.ys = j.at("samples_y").get<std::vector<double>>();
}

}  // namespace detail

inline nlohmann::json model_to_json(const FittedModel& m) {
  nlohmann::json j;
  j["schema_version"] = kModelSchemaVersion;
  j["geometry_ref"] = {{"r_brain", m.geom_ref.r_brain},
                       {"r_skull", m.geom_ref.r_skull},
                       {"r_scalp", m.geom_ref.r_scalp}};
  j["reference"] = {{"s_brain", m.reference.params.s_brain},
                    {"gamma_brain", m.reference.params.gamma_brain},
                    {"gamma_skull", m.reference.params.gamma_skull},
                    {"gamma_scalp", m.reference.params.gamma_scalp},
                    {"objective", m.reference.objective},
                    {"iterations", m.reference.iterations},
                    {"converged", m.reference.converged},
                    {"freq_grid", m.reference.freq_grid}};
  j["fits"] = {
      {"alpha_vs_eta", detail::fit_to_json(m.alpha_fit, m.alpha_samples)},
      {"gamma_brain_vs_psi13",
       detail::fit_to_json(m.gamma_brain_vs_psi13, m.gamma_brain_samples)},
      {"gamma_skull_vs_psi13",
       detail::fit_to_json(m.gamma_skull_vs_psi13, m.gamma_skull13_samples)},
      {"gamma_scalp_vs_psi23",
       detail::fit_to_json(m.gamma_scalp_vs_psi23, m.gamma_scalp_samples)},
      {"gamma_skull_vs_psi23",
       detail::fit_to_json(m.gamma_skull_vs_psi23, m.gamma_skull23_samples)}};
  j["tissue_baseline_hash"] = m.tissue_hash;
  return j;
}

inline FittedModel model_from_json(const nlohmann::json& j) {
  if (j.at("schema_version").get<int>() != kModelSchemaVersion)
    throw FormatError("model.json: unsupported schema version");
  FittedModel m;
  const auto& g = j.at("geometry_ref");
  m.geom_ref = HeadGeometry(g.at("r_brain").get<double>(),
                            g.at("r_skull").get<double>(),
                            g.at("r_scalp").get<double>());
  const auto& r = j.at("reference");
  m.reference.params = CircuitParams{
      r.at("s_brain").get<double>(), r.at("gamma_brain").get<double>(),
      r.at("gamma_skull").get<double>(), r.at("gamma_scalp").get<double>(),
      0.0};
  m.reference.objective = r.at("objective").get<double>();
  m.reference.iterations = r.at("iterations").get<int>();
  m.reference.converged = r.at("converged").get<bool>();
  m.reference.freq_grid = r.at("freq_grid").get<std::vector<double>>();
  const auto& f = j.at("fits");
  detail::fit_from_json(f.at("alpha_vs_eta"), m.alpha_fit, m.alpha_samples);
  detail::fit_from_json(f.at("gamma_brain_vs_psi13"), m.gamma_brain_vs_psi13,
                        m.gamma_brain_samples);
  detail::fit_from_json(f.at("gamma_skull_vs_psi13"), m.gamma_skull_vs_psi13,
                        m.gamma_skull13_samples);
  detail::fit_from_json(f.at("gamma_scalp_vs_psi23"), m.gamma_scalp_vs_psi23,
                        m.gamma_scalp_samples);
  detail::fit_from_json(f.at("gamma_skull_vs_psi23"), m.gamma_skull_vs_psi23,
                        m.gamma_skull23_samples);
  m.tissue_hash = j.at("tissue_baseline_hash").get<std::string>();
  return m;
}

inline FittedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

// FNV-1a over the sampled tissue data, for provenance tracking.
inline std::string tissue_set_hash(const TissueSet& ts) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const TissueSpectrum* t : {&ts.brain, &ts.skull, &ts.scalp, &ts.air}) {
    mix(t->name().data(), t->name().size());
    for (const auto& s : t->samples()) mix(&s, sizeof(s));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace headcirc
