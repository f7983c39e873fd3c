// Batch command-line front end: calibration, sweeps, validation, exports.

#include <complex>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "headcirc/calibration.hpp"
#include "headcirc/circuit.hpp"
#include "headcirc/config.hpp"
#include "headcirc/csv.hpp"
#include "headcirc/model_io.hpp"
#include "headcirc/spice.hpp"
#include "headcirc/ssh.hpp"
#include "headcirc/svg.hpp"
#include "headcirc/validation.hpp"

namespace {

namespace fs = std::filesystem;
using namespace headcirc;

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitOperation = 4;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string tissues_path;
  std::string model_path;
  std::optional<double> freq_min, freq_max;
  std::optional<int> freq_points;
  std::optional<double> eta;
  std::string t_skull_mm_list;
  std::optional<double> freeze_at;
  std::optional<unsigned> threads;
  std::optional<double> sigma;  // homogeneous diagnostic
  bool emit_svg = false;
};

RunConfig resolve_config(const CliOptions& cli) {
  RunConfig cfg;
  if (!cli.config_path.empty()) cfg = load_run_config(cli.config_path);
  if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
  if (!cli.tissues_path.empty()) cfg.tissue_manifest = cli.tissues_path;
  if (cli.model_path.empty() == false) cfg.model_path = cli.model_path;
  if (cli.freq_min) cfg.freq_grid.min_hz = *cli.freq_min;
  if (cli.freq_max) cfg.freq_grid.max_hz = *cli.freq_max;
  if (cli.freq_points) cfg.freq_grid.points = *cli.freq_points;
  if (cli.threads) cfg.threads = *cli.threads;
  if (cli.freeze_at) cfg.freeze_at_hz = cli.freeze_at;
  if (cli.eta) {
    const double r_dip = *cli.eta * cfg.geometry.r_brain;
    cfg.dipole = DipoleSource(r_dip, cfg.dipole.p_r, cfg.dipole.d);
  }
  return cfg;
}

std::shared_ptr<const TissueSet> resolve_tissues(const RunConfig& cfg) {
  if (cfg.tissue_manifest.empty())
    throw ValidationError("no tissue manifest given (config 'tissues' or --tissues)");
  return std::make_shared<const TissueSet>(
      load_tissue_manifest(cfg.tissue_manifest));
}

void emit(const RunConfig& cfg, const std::string& name,
          const std::string& content) {
  fs::create_directories(cfg.output_dir);
  const fs::path p = fs::path(cfg.output_dir) / name;
  write_file_atomic(p, content);
  std::cout << "wrote " << p.string() << "\n";
}

FittedModel require_model(const RunConfig& cfg) {
  if (!cfg.model_path)
    throw ValidationError("this command requires --model PATH");
  return load_model(*cfg.model_path);
}

std::vector<double> parse_list(const std::string& s, double scale) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok) * scale);
  return out;
}

void warn_to_stderr(const std::string& msg) {
  std::cerr << "warning: " << msg << "\n";
}

int cmd_ssh_sweep(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const auto tissues = resolve_tissues(cfg);
  std::vector<int> terms;
  const SweepResult sweep =
      ssh_frequency_sweep(cfg.geometry, cfg.dipole, tissues,
                          cfg.freq_grid.values(), cfg.ssh, cfg.threads, &terms);
  emit(cfg, "ssh_sweep.csv", sweep_csv(sweep, &terms));
  if (cli.emit_svg)
    emit(cfg, "ssh_sweep.svg", sweep_svg({sweep}, "scalp potential (ssh)"));
  return 0;
}

int cmd_circuit_sweep(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const auto tissues = resolve_tissues(cfg);
  const FittedModel model = require_model(cfg);
  const Netlist net = fitted_netlist(model, cfg.geometry, cfg.dipole, tissues,
                                     warn_to_stderr);
  const SweepResult sweep =
      circuit_frequency_sweep(net, cfg.freq_grid.values(), cfg.threads);
  emit(cfg, "circuit_sweep.csv", sweep_csv(sweep));
  if (cli.emit_svg)
    emit(cfg, "circuit_sweep.svg",
         sweep_svg({sweep}, "scalp potential (circuit)"));
  return 0;
}

int cmd_calibrate(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const auto baseline = resolve_tissues(cfg);
  const DipoleSource centered(0.0, cfg.dipole.p_r, cfg.dipole.d);

  FittedModel model;
  model.geom_ref = cfg.geometry;
  model.reference = calibrate_reference(cfg.geometry, centered, baseline,
                                        cfg.freq_grid, cfg.optimizer, cfg.ssh);
  std::cout << "reference calibration: objective " << model.reference.objective
            << " after " << model.reference.iterations << " iterations\n";

  const AlphaSweep alpha =
      sweep_alpha(cfg.geometry, baseline, model.reference, cfg.dipole.p_r,
                  cfg.dipole.d, 25, 0.965, cfg.freq_grid, cfg.ssh, cfg.threads);
  model.alpha_fit = alpha.fit;
  model.alpha_samples = alpha.samples;

  const GammaSweep g13 =
      sweep_gamma_psi13(cfg.geometry, baseline, model.reference, 0.845, 0.875,
                        25, cfg.freq_grid, cfg.ssh, cfg.threads);
  model.gamma_brain_vs_psi13 = g13.primary_fit;
  model.gamma_brain_samples = g13.primary;
  model.gamma_skull_vs_psi13 = g13.secondary_fit;
  model.gamma_skull13_samples = g13.secondary;

  const GammaSweep g23 =
      sweep_gamma_psi23(cfg.geometry, baseline, model.reference, 0.9097,
                        0.9490, 25, cfg.freq_grid, cfg.ssh, cfg.threads);
  model.gamma_scalp_vs_psi23 = g23.primary_fit;
  model.gamma_scalp_samples = g23.primary;
  model.gamma_skull_vs_psi23 = g23.secondary_fit;
  model.gamma_skull23_samples = g23.secondary;

  model.tissue_hash = tissue_set_hash(*baseline);
  emit(cfg, "model.json", model_to_json(model).dump(2) + "\n");
  return 0;
}

int cmd_fit_report(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const FittedModel m = require_model(cfg);
  emit(cfg, "fit_alpha_vs_eta.csv",
       fit_report_csv(m.alpha_samples, m.alpha_fit));
  emit(cfg, "fit_gamma_brain_vs_psi13.csv",
       fit_report_csv(m.gamma_brain_samples, m.gamma_brain_vs_psi13));
  emit(cfg, "fit_gamma_skull_vs_psi13.csv",
       fit_report_csv(m.gamma_skull13_samples, m.gamma_skull_vs_psi13));
  emit(cfg, "fit_gamma_scalp_vs_psi23.csv",
       fit_report_csv(m.gamma_scalp_samples, m.gamma_scalp_vs_psi23));
  emit(cfg, "fit_gamma_skull_vs_psi23.csv",
       fit_report_csv(m.gamma_skull23_samples, m.gamma_skull_vs_psi23));
  return 0;
}

int cmd_validate_mrfe(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const auto tissues = resolve_tissues(cfg);
  const FittedModel model = require_model(cfg);
  std::vector<double> etas =
      cli.eta ? std::vector<double>{*cli.eta} : default_eta_list();
  std::vector<double> ts = cli.t_skull_mm_list.empty()
                               ? default_t_skull_list()
                               : parse_list(cli.t_skull_mm_list, 1e-3);
  const MrfeGrid grid =
      mrfe_grid(model, tissues, etas, ts, cfg.freq_grid, cfg.ssh,
                cfg.dipole.p_r, cfg.dipole.d, cfg.threads);
  emit(cfg, "mrfe_grid.csv", mrfe_grid_csv(grid));
  if (cli.emit_svg) emit(cfg, "mrfe_grid.svg", mrfe_grid_svg(grid));
  return 0;
}

int cmd_ablation(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const auto tissues = resolve_tissues(cfg);
  const FittedModel model = require_model(cfg);
  DipoleSource dip = cfg.dipole;
  if (!cli.eta && dip.r_dip == 0.0)
    dip = DipoleSource(7.64e-2, dip.p_r, dip.d);  // near-cortical default
  const AblationStudy study =
      ablation_study(model, cfg.geometry, dip, tissues, cfg.freq_grid,
                     cli.freeze_at.value_or(0.0), cfg.threads, warn_to_stderr);
  for (int c = 0; c < 3; ++c)
    emit(cfg, std::string("ablation_") + study.cases[c].label + ".csv",
         sweep_csv(study.cases[c]));
  std::ostringstream os;
  os.precision(17);
  os << std::scientific;
  os << "frequency_hz,rel_error_case_i,rel_error_case_ii\n";
  for (std::size_t i = 0; i < study.cases[0].freqs.size(); ++i)
    os << study.cases[0].freqs[i] << "," << study.rel_error[0][i] << ","
       << study.rel_error[1][i] << "\n";
  emit(cfg, "ablation_relative_error.csv", os.str());
  if (cli.emit_svg)
    emit(cfg, "ablation.svg",
         sweep_svg({study.cases[0], study.cases[1], study.cases[2]},
                   "ablation: scalp potential magnitude"));
  return 0;
}

int cmd_export_netlist(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const auto tissues = resolve_tissues(cfg);
  const FittedModel model = require_model(cfg);
  const Netlist net = fitted_netlist(model, cfg.geometry, cfg.dipole, tissues,
                                     warn_to_stderr);
  emit(cfg, "head_circuit.cir", export_spice_netlist(net, cfg.freeze_at_hz));
  return 0;
}

int cmd_homogeneous_diagnostic(const CliOptions& cli) {
  const RunConfig cfg = resolve_config(cli);
  const double sigma = cli.sigma.value_or(0.33);
  const auto tissues = std::make_shared<const TissueSet>(TissueSet{
      TissueSpectrum::constant("brain", sigma, 0.0),
      TissueSpectrum::constant("skull", sigma, 0.0),
      TissueSpectrum::constant("scalp", sigma, 0.0),
      TissueSpectrum::constant("air", sigma, 0.0)});
  std::ostringstream os;
  os.precision(17);
  os << std::scientific;
  os << "eta,v_series_abs,v_infinite_medium_abs,ratio\n";
  const double f = 100.0;
  for (int i = 0; i <= 19; ++i) {
    const double eta = 0.05 * i;
    const DipoleSource dip(eta * cfg.geometry.r_brain, cfg.dipole.p_r,
                           cfg.dipole.d);
    const std::complex<double> vs =
        scalp_potential(cfg.geometry, dip, *tissues, f, cfg.ssh);
    const double dist = cfg.geometry.r_scalp - dip.r_dip;
    const double v_inf = dip.p_r / (4.0 * M_PI * sigma * dist * dist);
    os << eta << "," << std::abs(vs) << "," << v_inf << ","
       << std::abs(vs) / v_inf << "\n";
  }
  emit(cfg, "homogeneous_diagnostic.csv", os.str());
  std::cout << "series-vs-infinite-medium comparison for a homogeneous "
               "sphere; the two agree at eta = 0 and diverge for eta > 0 "
               "(see CSV for the ratio)\n";
  return 0;
}

void attach_common(CLI::App* cmd, CliOptions& cli) {
  cmd->add_option("--config", cli.config_path, "run configuration JSON");
  cmd->add_option("--out", cli.out_dir, "output directory");
  cmd->add_option("--tissues", cli.tissues_path, "tissue-set manifest JSON");
  cmd->add_option("--model", cli.model_path, "fitted model.json");
  cmd->add_option("--freq-min", cli.freq_min, "sweep start (Hz)");
  cmd->add_option("--freq-max", cli.freq_max, "sweep end (Hz)");
  cmd->add_option("--freq-points", cli.freq_points, "sweep point count");
  cmd->add_option("--eta", cli.eta, "dipole eccentricity override");
  cmd->add_option("--t-skull-mm", cli.t_skull_mm_list,
                  "comma-separated skull thickness list (mm)");
  cmd->add_option("--freeze-at", cli.freeze_at,
                  "element freezing frequency (Hz)");
  cmd->add_option("--threads", cli.threads, "worker thread cap");
  cmd->add_option("--sigma", cli.sigma,
                  "homogeneous conductivity (homogeneous-diagnostic)");
  cmd->add_flag("--svg", cli.emit_svg, "also emit SVG figures");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Three-shell head modeling: semi-analytical scalp potentials, lumped "
      "RC equivalent circuit, calibration, and validation"};
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 success, 2 usage error, 3 configuration error, "
      "4 operation error (machine-readable JSON on stderr)");

  CliOptions cli;
  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const CliOptions&);
  };
  const Cmd cmds[] = {
      {"ssh-sweep", "frequency sweep of the semi-analytical solver",
       cmd_ssh_sweep},
      {"circuit-sweep", "frequency sweep of the fitted equivalent circuit",
       cmd_circuit_sweep},
      {"calibrate", "reference calibration, parameter sweeps, and fits",
       cmd_calibrate},
      {"fit-report", "per-sweep CSV of optimized samples vs fit",
       cmd_fit_report},
      {"validate-mrfe", "MRFE grid over eccentricity and skull thickness",
       cmd_validate_mrfe},
      {"ablation", "dispersion / displacement-current ablation study",
       cmd_ablation},
      {"export-netlist", "SPICE netlist export", cmd_export_netlist},
      {"homogeneous-diagnostic",
       "series vs infinite-medium oracle for homogeneous media",
       cmd_homogeneous_diagnostic},
  };
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    attach_common(sub, cli);
    sub->callback([&cli, fn = c.fn] {
      throw CLI::RuntimeError(fn(cli));
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    if (dynamic_cast<const CLI::RuntimeError*>(&e))
      return e.get_exit_code();
    std::cerr << nlohmann::json{{"type", "usage"}, {"message", e.what()}}.dump()
              << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << nlohmann::json{{"type", "config"}, {"message", e.what()}}.dump()
              << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << nlohmann::json{{"type", "config"}, {"message", e.what()}}.dump()
              << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"type", "operation"}, {"message", e.what()}}
                     .dump()
              << "\n";
    return kExitOperation;
  }
  return 0;
}
