#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <memory>

#include "headcirc/validation.hpp"

using namespace headcirc;
using C = std::complex<double>;

namespace {

SweepResult make_sweep(std::vector<double> freqs, std::vector<C> values,
                       std::string label = "x") {
  SweepResult s;
  s.freqs = std::move(freqs);
  s.values = std::move(values);
  s.label = std::move(label);
  return s;
}

std::shared_ptr<const TissueSet> baseline_tissues() {
  return std::make_shared<const TissueSet>(
      TissueSet{TissueSpectrum::constant("brain", 0.33, 0.0),
                TissueSpectrum::constant("skull", 0.0066, 0.0),
                TissueSpectrum::constant("scalp", 0.33, 0.0),
                TissueSpectrum::constant("air", 0.0, 0.0)});
}

FittedModel synthetic_model() {
  FittedModel m;
  m.reference.params = CircuitParams{10.0, 0.62, 3.0, 0.8, 0.0};
  m.reference.converged = true;
  auto const_fit = [](double value, double lo, double hi) {
    PolyFit f;
    f.degree = 0;
    f.coeffs = {value};
    f.domain_lo = lo;
    f.domain_hi = hi;
    return f;
  };
  m.alpha_fit = const_fit(0.0, 0.0, 0.965);
  m.gamma_brain_vs_psi13 = const_fit(0.62, 0.845, 0.875);
  m.gamma_skull_vs_psi13 = const_fit(3.0, 0.845, 0.875);
  m.gamma_scalp_vs_psi23 = const_fit(0.8, 0.9097, 0.9490);
  m.gamma_skull_vs_psi23 = const_fit(3.0, 0.9097, 0.9490);
  return m;
}

}  // namespace

TEST_CASE("mrfe of identical sweeps is zero") {
  const auto s = make_sweep({10.0, 100.0}, {C(1.0, 0.5), C(2.0, -0.25)});
  CHECK(mrfe(s, s) == 0.0);
}

TEST_CASE("constant 10% offset gives mrfe 0.1") {
  const std::vector<double> f = {10.0, 100.0, 1000.0};
  const std::vector<C> v = {C(1.0, 0.2), C(0.5, -0.1), C(2.0, 0.0)};
  std::vector<C> v2 = v;
  for (auto& x : v2) x *= 1.1;
  CHECK_THAT(mrfe(make_sweep(f, v2), make_sweep(f, v)),
             Catch::Matchers::WithinAbs(0.1, 1e-14));
}

TEST_CASE("three-point hand case is exact") {
  const std::vector<double> f = {1.0, 2.0, 3.0};
  const std::vector<C> ref = {C(1.0), C(1.0), C(1.0)};
  const std::vector<C> cir = {C(1.05), C(0.95), C(1.10)};
  CHECK_THAT(mrfe(make_sweep(f, cir), make_sweep(f, ref)),
             Catch::Matchers::WithinAbs(0.2 / 3.0, 1e-15));
}

TEST_CASE("mrfe of k-scaled sweep is |k - 1|") {
  const std::vector<double> f = {1.0, 2.0};
  const std::vector<C> ref = {C(0.3, 0.4), C(-1.0, 2.0)};
  for (double k : {0.5, 1.0, 2.5}) {
    std::vector<C> scaled = ref;
    for (auto& x : scaled) x *= k;
    CHECK_THAT(mrfe(make_sweep(f, scaled), make_sweep(f, ref)),
               Catch::Matchers::WithinAbs(std::abs(k - 1.0), 1e-14));
  }
}

TEST_CASE("mrfe is invariant under a common per-frequency complex factor") {
  const std::vector<double> f = {1.0, 2.0, 3.0};
  std::vector<C> ref = {C(1.0, 0.1), C(0.5, -0.2), C(2.0, 0.3)};
  std::vector<C> cir = {C(1.1, 0.1), C(0.45, -0.2), C(2.2, 0.4)};
  const double before = mrfe(make_sweep(f, cir), make_sweep(f, ref));
  const std::vector<C> factors = {C(2.0, 1.0), C(-0.5, 0.25), C(0.0, 3.0)};
  for (std::size_t i = 0; i < 3; ++i) {
    ref[i] *= factors[i];
    cir[i] *= factors[i];
  }
  const double after = mrfe(make_sweep(f, cir), make_sweep(f, ref));
  CHECK_THAT(after, Catch::Matchers::WithinRel(before, 1e-12));
}

TEST_CASE("mrfe input validation") {
  const auto a = make_sweep({1.0, 2.0}, {C(1.0), C(1.0)});
  const auto b = make_sweep({1.0, 3.0}, {C(1.0), C(1.0)});
  CHECK_THROWS_AS(mrfe(a, b), InputError);
  const auto z = make_sweep({1.0, 2.0}, {C(1.0), C(0.0)});
  CHECK_THROWS_AS(mrfe(a, z), InputError);
  const auto e = make_sweep({}, {});
  CHECK_THROWS_AS(mrfe(e, e), InputError);
}

TEST_CASE("ssh and circuit sweeps share grids and feed mrfe directly") {
  const auto ts = baseline_tissues();
  const FittedModel model = synthetic_model();
  const HeadGeometry g = standard_geometry();
  const DipoleSource dip(0.0, 15e-9, 1e-3);
  const std::vector<double> freqs = FrequencyGrid{10.0, 50e3, 9}.values();
  const SweepResult vs = ssh_frequency_sweep(g, dip, ts, freqs, {}, 2);
  const Netlist net = fitted_netlist(model, g, dip, ts);
  const SweepResult vc = circuit_frequency_sweep(net, freqs, 2);
  CHECK(vs.freqs == vc.freqs);
  CHECK_NOTHROW(mrfe(vc, vs));
  // determinism: a second run is bit-identical
  const SweepResult vs2 = ssh_frequency_sweep(g, dip, ts, freqs, {}, 4);
  CHECK(vs.values == vs2.values);
}

TEST_CASE("terms_used metadata is returned per frequency") {
  const auto ts = baseline_tissues();
  const std::vector<double> freqs = {10.0, 1000.0};
  std::vector<int> terms;
  ssh_frequency_sweep(standard_geometry(), DipoleSource(0.0, 15e-9, 1e-3), ts,
                      freqs, {}, 1, &terms);
  REQUIRE(terms.size() == 2);
  for (int t : terms) CHECK(t >= 1);
}

TEST_CASE("default validation grids match the published sweep design") {
  const auto etas = default_eta_list();
  REQUIRE(etas.size() == 5);
  CHECK(etas.front() == 0.233);
  CHECK(etas.back() == 0.966);
  const auto ts = default_t_skull_list();
  REQUIRE(ts.size() == 11);
  for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);
  CHECK_THAT(ts.front(), Catch::Matchers::WithinAbs(4.6e-3, 1e-12));
  CHECK_THAT(ts.back(), Catch::Matchers::WithinAbs(8.2e-3, 1e-12));
  // the standard 5.9 mm column is part of the grid
  bool has_standard = false;
  for (double t : ts)
    if (std::abs(t - 5.9e-3) < 1e-9) has_standard = true;
  CHECK(has_standard);
}

TEST_CASE("ablation tissue transforms: freeze and permittivity drop") {
  const TissueSpectrum disp("brain", {{10.0, 0.10, 1e6}, {1000.0, 0.20, 1e4}});
  const TissueSet full{disp, disp, disp,
                       TissueSpectrum::constant("air", 0.0, 1.0)};
  const auto ohmic = ablation_tissues(full, AblationCase::ohmic_nondispersive);
  CHECK_FALSE(ohmic->brain.dispersive());
  CHECK(ohmic->brain.at(1000.0).sigma == 0.10);  // anchored at lowest f
  CHECK(ohmic->brain.at(1000.0).eps_rel == 0.0);
  const auto r_only = ablation_tissues(full, AblationCase::dispersive_r_only);
  CHECK(r_only->brain.dispersive());
  CHECK(r_only->brain.at(1000.0).sigma == 0.20);
  CHECK(r_only->brain.at(1000.0).eps_rel == 0.0);
  const auto rc = ablation_tissues(full, AblationCase::dispersive_rc);
  CHECK(rc->brain.at(1000.0).eps_rel == 1e4);
  // configurable anchor
  const auto anchored =
      ablation_tissues(full, AblationCase::ohmic_nondispersive, 1000.0);
  CHECK(anchored->brain.at(10.0).sigma == 0.20);
}

TEST_CASE("non-dispersive ablation degenerates with a warning") {
  const auto ts = baseline_tissues();
  const FittedModel model = synthetic_model();
  int warnings = 0;
  const AblationStudy study = ablation_study(
      model, standard_geometry(), DipoleSource(0.0, 15e-9, 1e-3), ts,
      FrequencyGrid{10.0, 50e3, 7}, 0.0, 2,
      [&warnings](const std::string&) { ++warnings; });
  CHECK(study.degenerate);
  CHECK(warnings == 1);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < study.cases[c].values.size(); ++i) {
      CHECK(study.cases[c].values[i] == study.cases[2].values[i]);
      CHECK(study.rel_error[c][i] == 0.0);
    }
}

TEST_CASE("ablation case iii equals the plain calibrated circuit sweep") {
  const TissueSpectrum disp("t", {{10.0, 0.10, 1e6}, {50e3, 0.25, 1e4}});
  auto full = std::make_shared<const TissueSet>(
      TissueSet{disp, disp, disp, TissueSpectrum::constant("air", 0.0, 1.0)});
  const FittedModel model = synthetic_model();
  const DipoleSource dip(0.0, 15e-9, 1e-3);
  const FrequencyGrid grid{10.0, 50e3, 7};
  const AblationStudy study =
      ablation_study(model, standard_geometry(), dip, full, grid, 0.0, 1);
  const Netlist net = fitted_netlist(model, standard_geometry(), dip, full);
  const SweepResult plain = circuit_frequency_sweep(net, grid.values());
  for (std::size_t i = 0; i < plain.values.size(); ++i)
    CHECK(study.cases[2].values[i] == plain.values[i]);
}
