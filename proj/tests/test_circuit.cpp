#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <memory>

#include "headcirc/circuit.hpp"

using namespace headcirc;
using C = std::complex<double>;

namespace {

std::shared_ptr<const TissueSet> baseline_tissues() {
  return std::make_shared<const TissueSet>(
      TissueSet{TissueSpectrum::constant("brain", 0.33, 0.0),
                TissueSpectrum::constant("skull", 0.0066, 0.0),
                TissueSpectrum::constant("scalp", 0.33, 0.0),
                TissueSpectrum::constant("air", 0.0, 0.0)});
}

CircuitParams demo_params(double alpha = 0.0) {
  return CircuitParams{10.0, 0.62, 3.0, 0.8, alpha};
}

const Branch& find_branch(const Netlist& net, BranchLayer layer) {
  for (const auto& br : net.branches())
    if (br.layer == layer) return br;
  FAIL("branch not found");
  return net.branches().front();
}

// Reduced netlist with hand-picked unit branches for divider / RC checks.
// The tissue set carries the electrical values; geometry is a placeholder.
Netlist reduced_netlist(std::shared_ptr<const TissueSet> ts,
                        std::vector<Branch> branches, double i_src) {
  Netlist net(standard_geometry(), DipoleSource(0.0, i_src, 1.0),
              std::move(ts), demo_params(), NetlistOptions{});
  net.mutable_branches() = std::move(branches);
  return net;
}

}  // namespace

TEST_CASE("netlist structure: 5 nodes, 8 branches, 1 source") {
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(0.0, 15e-9, 1e-3),
                                    baseline_tissues(), demo_params());
  CHECK(net.branches().size() == 8);
  CHECK(net.source_current() == 15e-9 / 1e-3);
  CHECK(net.probe_node() == kNode3);
  // every node index appears
  bool seen[5] = {};
  for (const auto& br : net.branches()) {
    seen[br.node_a + 1] = true;
    seen[br.node_b + 1] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("alpha = 0 splits the brain radial branch symmetrically") {
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(0.0, 15e-9, 1e-3),
                                    baseline_tissues(), demo_params(0.0));
  const Branch& up = find_branch(net, BranchLayer::brain_up);
  const Branch& down = find_branch(net, BranchLayer::brain_down);
  CHECK(up.geom_factor == down.geom_factor);
}

TEST_CASE("alpha = 0.5 gives Z_up = 0.5 Z0 and Z_down = 1.5 Z0") {
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(0.0, 15e-9, 1e-3),
                                    baseline_tissues(), demo_params(0.5));
  const double y0 = 1.0 / 10.0;  // 1 / s_brain
  const Branch& up = find_branch(net, BranchLayer::brain_up);
  const Branch& down = find_branch(net, BranchLayer::brain_down);
  CHECK_THAT(up.geom_factor, Catch::Matchers::WithinRel(y0 / 0.5, 1e-15));
  CHECK_THAT(down.geom_factor, Catch::Matchers::WithinRel(y0 / 1.5, 1e-15));
}

TEST_CASE("tangential admittances are gamma times the radial ones") {
  const HeadGeometry g = standard_geometry();
  const Netlist net = build_netlist(g, DipoleSource(0.0, 15e-9, 1e-3),
                                    baseline_tissues(), demo_params());
  const Branch& skull_r = find_branch(net, BranchLayer::skull_rad);
  const Branch& skull_t = find_branch(net, BranchLayer::skull_tan);
  CHECK_THAT(skull_t.geom_factor / skull_r.geom_factor,
             Catch::Matchers::WithinRel(3.0, 1e-12));
  const Branch& scalp_r = find_branch(net, BranchLayer::scalp_rad);
  const Branch& scalp_t = find_branch(net, BranchLayer::scalp_tan);
  CHECK_THAT(scalp_t.geom_factor / scalp_r.geom_factor,
             Catch::Matchers::WithinRel(0.8, 1e-12));
  // spreading-resistance geometric factors
  const double g_skull =
      (1.0 / (4.0 * M_PI)) * (1.0 / g.r_brain - 1.0 / g.r_skull);
  CHECK_THAT(skull_r.geom_factor, Catch::Matchers::WithinRel(1.0 / g_skull, 1e-12));
  const Branch& air = find_branch(net, BranchLayer::air);
  CHECK_THAT(air.geom_factor,
             Catch::Matchers::WithinRel(4.0 * M_PI * g.r_scalp, 1e-12));
}

TEST_CASE("parameter validation rejects out-of-range values") {
  const auto ts = baseline_tissues();
  const DipoleSource dip(0.0, 15e-9, 1e-3);
  CircuitParams p = demo_params();
  p.alpha = 1.0;
  CHECK_THROWS_AS(build_netlist(standard_geometry(), dip, ts, p),
                  ParameterError);
  p = demo_params();
  p.gamma_skull = 0.0;
  CHECK_THROWS_AS(build_netlist(standard_geometry(), dip, ts, p),
                  ParameterError);
  p = demo_params();
  p.s_brain = -1.0;
  CHECK_THROWS_AS(build_netlist(standard_geometry(), dip, ts, p),
                  ParameterError);
}

TEST_CASE("canonical resistive divider solves to the midpoint voltage") {
  auto ts = baseline_tissues();
  const TissueSpectrum* unit = nullptr;
  auto set = std::make_shared<TissueSet>(
      TissueSet{TissueSpectrum::constant("u", 1.0, 0.0),
                TissueSpectrum::constant("skull", 1.0, 0.0),
                TissueSpectrum::constant("scalp", 1.0, 0.0),
                TissueSpectrum::constant("air", 1.0, 0.0)});
  unit = &set->brain;
  // I = 1 A injected between the two equal admittances and GND: both 1 S
  // conductances hang from the injection node, so V = I/(2G) = 0.5 V.
  std::vector<Branch> branches = {
      {0, kNodeSrc, kGnd, BranchLayer::brain_up, 1.0, unit},
      {1, kNodeSrc, kGnd, BranchLayer::brain_down, 1.0, unit},
      // keep the remaining unknowns grounded so the 4x4 system is regular
      {2, kNode1, kGnd, BranchLayer::brain_tan, 1.0, unit},
      {3, kNode2, kGnd, BranchLayer::skull_tan, 1.0, unit},
      {4, kNode3, kGnd, BranchLayer::scalp_tan, 1.0, unit},
  };
  const Netlist net = reduced_netlist(set, std::move(branches), 1.0);
  const NodalSolution sol = solve_nodal(net, 100.0);
  CHECK_THAT(sol.at(kNodeSrc).real(), Catch::Matchers::WithinRel(0.5, 1e-12));
  CHECK_THAT(std::abs(sol.at(kNodeSrc).imag()),
             Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK(sol.kcl_residual < 1e-12);
}

TEST_CASE("single-pole RC branch matches the analytic response") {
  // R = 1 kOhm parallel C = 1 uF driven by 1 mA at the corner frequency
  const double eps_rel = 1e-6 / kEps0;  // so that C = geom_factor * eps = 1e-6
  auto set = std::make_shared<TissueSet>(
      TissueSet{TissueSpectrum::constant("rc", 1e-3, eps_rel),
                TissueSpectrum::constant("skull", 1.0, 0.0),
                TissueSpectrum::constant("scalp", 1.0, 0.0),
                TissueSpectrum::constant("air", 1.0, 0.0)});
  std::vector<Branch> branches = {
      {0, kNodeSrc, kGnd, BranchLayer::brain_down, 1.0, &set->brain},
      {1, kNode1, kGnd, BranchLayer::brain_tan, 1.0, &set->skull},
      {2, kNode2, kGnd, BranchLayer::skull_tan, 1.0, &set->skull},
      {3, kNode3, kGnd, BranchLayer::scalp_tan, 1.0, &set->skull},
  };
  const double f = 1.0 / (2.0 * M_PI * 1e-3);  // omega = 1000 rad/s
  const Netlist net = reduced_netlist(set, std::move(branches), 1e-3);
  const NodalSolution sol = solve_nodal(net, f);
  const C v = sol.at(kNodeSrc);
  CHECK_THAT(std::abs(v), Catch::Matchers::WithinRel(1.0 / std::sqrt(2.0), 1e-9));
  CHECK_THAT(std::arg(v) * 180.0 / M_PI,
             Catch::Matchers::WithinAbs(-45.0, 1e-6));
}

TEST_CASE("KCL holds at every internal node of the full netlist") {
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(3e-2, 15e-9, 1e-3),
                                    baseline_tissues(), demo_params(0.3));
  for (double f : {10.0, 1000.0, 5e4}) {
    const NodalSolution sol = solve_nodal(net, f);
    CHECK(sol.kcl_residual < 1e-12);
    for (int node : {kNode1, kNode2, kNode3}) {
      C sum = 0.0;
      for (const auto& br : net.branches()) {
        if (br.node_a == node) sum -= branch_current(net, sol, br);
        if (br.node_b == node) sum += branch_current(net, sol, br);
      }
      CHECK(std::abs(sum) / net.source_current() < 1e-12);
    }
  }
}

TEST_CASE("isolated node produces a singularity error naming it") {
  auto set = std::make_shared<TissueSet>(
      TissueSet{TissueSpectrum::constant("u", 1.0, 0.0),
                TissueSpectrum::constant("skull", 1.0, 0.0),
                TissueSpectrum::constant("scalp", 1.0, 0.0),
                TissueSpectrum::constant("air", 1.0, 0.0)});
  std::vector<Branch> branches = {
      {0, kNodeSrc, kNode1, BranchLayer::brain_up, 1.0, &set->brain},
      {1, kNode1, kGnd, BranchLayer::brain_tan, 1.0, &set->brain},
      {2, kNode2, kGnd, BranchLayer::skull_tan, 1.0, &set->brain},
      // N3 left floating
  };
  const Netlist net = reduced_netlist(set, std::move(branches), 1.0);
  try {
    solve_nodal(net, 100.0);
    FAIL("expected SingularityError");
  } catch (const SingularityError& e) {
    CHECK(std::string(e.what()).find("N3") != std::string::npos);
  }
}

TEST_CASE("nodal reciprocity: transfer impedance is symmetric") {
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(4e-2, 15e-9, 1e-3),
                                    baseline_tissues(), demo_params(0.4));
  const double f = 1234.0;
  std::array<std::array<C, kNumUnknowns>, kNumUnknowns> y;
  stamp_admittance_matrix(net, f, y);
  auto ya = y;
  std::array<C, kNumUnknowns> rhs_src{};
  rhs_src[kNodeSrc] = 1.0;
  detail::solve_dense<kNumUnknowns>(ya, rhs_src, "");
  auto yb = y;
  std::array<C, kNumUnknowns> rhs_probe{};
  rhs_probe[kNode3] = 1.0;
  detail::solve_dense<kNumUnknowns>(yb, rhs_probe, "");
  CHECK(std::abs(rhs_src[kNode3] - rhs_probe[kNodeSrc]) /
            std::abs(rhs_src[kNode3]) <
        1e-12);
}

TEST_CASE("passivity: the source delivers nonnegative power") {
  auto dispersive = std::make_shared<TissueSet>(
      TissueSet{TissueSpectrum::constant("brain", 0.33, 1e5),
                TissueSpectrum::constant("skull", 0.0066, 1e4),
                TissueSpectrum::constant("scalp", 0.33, 1e5),
                TissueSpectrum::constant("air", 0.0, 1.0)});
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(3e-2, 15e-9, 1e-3),
                                    dispersive, demo_params(0.2));
  for (double f : {10.0, 500.0, 5e4}) {
    const NodalSolution sol = solve_nodal(net, f);
    CHECK((sol.at(kNodeSrc) * std::conj(C(net.source_current()))).real() >=
          0.0);
  }
}

TEST_CASE("low-frequency limit equals the purely resistive solve") {
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(2e-2, 15e-9, 1e-3),
                                    baseline_tissues(), demo_params());
  // epsilon = 0 everywhere: the admittances are frequency independent
  const C lo = solve_nodal(net, 1e-3).at(kNode3);
  const C mid = solve_nodal(net, 1000.0).at(kNode3);
  CHECK(std::abs(lo - mid) / std::abs(mid) < 1e-10);
  CHECK(std::abs(lo.imag()) < 1e-15 * std::abs(lo.real()));
}

TEST_CASE("impedance scaling multiplies node voltages by exactly k") {
  const double k = 2.75;
  NetlistOptions scaled;
  scaled.impedance_scale = k;
  const auto ts = baseline_tissues();
  const DipoleSource dip(3e-2, 15e-9, 1e-3);
  const Netlist a = build_netlist(standard_geometry(), dip, ts, demo_params());
  const Netlist b =
      build_netlist(standard_geometry(), dip, ts, demo_params(), scaled);
  const NodalSolution sa = solve_nodal(a, 777.0);
  const NodalSolution sb = solve_nodal(b, 777.0);
  for (int n = 0; n < kNumUnknowns; ++n)
    CHECK(std::abs(sb.v[n] - k * sa.v[n]) <= 1e-14 * std::abs(sb.v[n]));
}

TEST_CASE("scalp peak voltage is linear in dipole moment and zero at p=0") {
  const auto ts = baseline_tissues();
  const C v1 = scalp_peak_voltage(standard_geometry(),
                                  DipoleSource(3e-2, 15e-9, 1e-3), ts,
                                  demo_params(), 100.0);
  const C v2 = scalp_peak_voltage(standard_geometry(),
                                  DipoleSource(3e-2, 30e-9, 1e-3), ts,
                                  demo_params(), 100.0);
  CHECK(std::abs(v2 - 2.0 * v1) <= 1e-14 * std::abs(v2));
  const C v0 = scalp_peak_voltage(standard_geometry(),
                                  DipoleSource(3e-2, 0.0, 1e-3), ts,
                                  demo_params(), 100.0);
  CHECK(v0 == C(0.0));
}

TEST_CASE("surface charge vanishes without a permittivity discontinuity") {
  // identical media on both sides
  auto same = std::make_shared<TissueSet>(
      TissueSet{TissueSpectrum::constant("brain", 0.33, 1e5),
                TissueSpectrum::constant("skull", 0.33, 1e5),
                TissueSpectrum::constant("scalp", 0.33, 1e5),
                TissueSpectrum::constant("air", 0.0, 1.0)});
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(3e-2, 15e-9, 1e-3), same,
                                    demo_params(0.2));
  const NodalSolution sol = solve_nodal(net, 1000.0);
  CHECK(std::abs(surface_charge(net, sol, Interface::brain_skull)) < 1e-30);

  // purely ohmic media
  const Netlist ohmic = build_netlist(standard_geometry(),
                                      DipoleSource(3e-2, 15e-9, 1e-3),
                                      baseline_tissues(), demo_params(0.2));
  const NodalSolution sol2 = solve_nodal(ohmic, 1000.0);
  CHECK(std::abs(surface_charge(ohmic, sol2, Interface::brain_skull)) == 0.0);
  CHECK(std::abs(surface_charge(ohmic, sol2, Interface::skull_scalp)) == 0.0);
}

TEST_CASE("surface charge matches the hand formula at 1 kHz") {
  auto ts = std::make_shared<TissueSet>(
      TissueSet{TissueSpectrum::constant("brain", 0.33, 1e5),
                TissueSpectrum::constant("skull", 0.0066, 1e4),
                TissueSpectrum::constant("scalp", 0.33, 1e5),
                TissueSpectrum::constant("air", 0.0, 1.0)});
  const Netlist net = build_netlist(standard_geometry(),
                                    DipoleSource(3e-2, 15e-9, 1e-3), ts,
                                    demo_params(0.2));
  const double f = 1000.0;
  const NodalSolution sol = solve_nodal(net, f);
  const C got = surface_charge(net, sol, Interface::brain_skull);

  // independent arithmetic from the solved branch current
  const Branch* skull_rad = nullptr;
  for (const auto& br : net.branches())
    if (br.layer == BranchLayer::skull_rad) skull_rad = &br;
  REQUIRE(skull_rad != nullptr);
  const C i_r = branch_current(net, sol, *skull_rad);
  const double r1 = net.geometry().r_brain;
  const C j_n = i_r / (4.0 * M_PI * r1 * r1);
  const C sc_brain = ts->brain.complex_conductivity(f).value;
  const C sc_skull = ts->skull.complex_conductivity(f).value;
  const C want = j_n * (1e4 * kEps0 / sc_skull - 1e5 * kEps0 / sc_brain);
  CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
  CHECK(std::abs(got) > 0.0);

  NodalSolution unsolved;
  CHECK_THROWS_AS(surface_charge(net, unsolved, Interface::brain_skull),
                  StateError);
}
