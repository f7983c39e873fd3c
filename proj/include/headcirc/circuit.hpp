#pragma once

// Lumped equivalent network of the three-shell head: ladder of radial
// branches with tangential shunts, solved per frequency by complex nodal
// analysis. Each branch is a parallel conductance-capacitance pair sharing
// one geometric factor, Y(f) = Gamma_g * (sigma(f) + i*w*eps(f)).

#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "headcirc/geometry.hpp"
#include "headcirc/tissue.hpp"

namespace headcirc {

struct CircuitParams {
  double s_brain;      // Ohm*(S/m), brain radial base impedance scale
  double gamma_brain;
  double gamma_skull;
  double gamma_scalp;
  double alpha = 0.0;  // in [0, 1)

  void validate() const {
    if (!(s_brain > 0.0)) throw ParameterError("circuit: s_brain must be > 0");
    if (!(gamma_brain > 0.0 && gamma_skull > 0.0 && gamma_scalp > 0.0))
      throw ParameterError("circuit: all gamma coefficients must be > 0");
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw ParameterError("circuit: alpha must be in [0, 1)");
  }
};

// Node indices; kGnd is the reference and is not an unknown.
inline constexpr int kGnd = -1;
inline constexpr int kNodeSrc = 0;
inline constexpr int kNode1 = 1;  // brain-skull interface
inline constexpr int kNode2 = 2;  // skull-scalp interface
inline constexpr int kNode3 = 3;  // scalp-air surface, probe
inline constexpr int kNumUnknowns = 4;

inline std::string node_name(int n) {
  switch (n) {
    case kGnd: return "GND";
    case kNodeSrc: return "NSRC";
    case kNode1: return "N1";
    case kNode2: return "N2";
    case kNode3: return "N3";
  }
  return "?";
}

enum class BranchLayer {
  brain_up,
  brain_down,
  brain_tan,
  skull_rad,
  skull_tan,
  scalp_rad,
  scalp_tan,
  air
};

inline const char* layer_name(BranchLayer l) {
  switch (l) {
    case BranchLayer::brain_up: return "brain_up";
    case BranchLayer::brain_down: return "brain_down";
    case BranchLayer::brain_tan: return "brain_tan";
    case BranchLayer::skull_rad: return "skull_rad";
    case BranchLayer::skull_tan: return "skull_tan";
    case BranchLayer::scalp_rad: return "scalp_rad";
    case BranchLayer::scalp_tan: return "scalp_tan";
    case BranchLayer::air: return "air";
  }
  return "?";
}

struct Branch {
  int id;
  int node_a;
  int node_b;
  BranchLayer layer;
  // Y(f) = geom_factor * sigma_c(f) / impedance_scale
  double geom_factor;              // m
  const TissueSpectrum* spectrum;  // owned by the parent Netlist's tissue set

  std::complex<double> admittance(double f, double impedance_scale) const {
    return geom_factor * spectrum->complex_conductivity(f).value /
           impedance_scale;
  }
};

struct NetlistOptions {
  bool include_air_branch = true;
  double impedance_scale = 1.0;  // multiplies every branch impedance
};

class Netlist {
 public:
  Netlist(HeadGeometry geom, DipoleSource dip,
          std::shared_ptr<const TissueSet> tissues, CircuitParams params,
          NetlistOptions opts)
      : geom_(geom),
        dip_(dip),
        tissues_(std::move(tissues)),
        params_(params),
        opts_(opts) {}

  const HeadGeometry& geometry() const { return geom_; }
  const DipoleSource& dipole() const { return dip_; }
  const TissueSet& tissues() const { return *tissues_; }
  const CircuitParams& params() const { return params_; }
  const NetlistOptions& options() const { return opts_; }
  const std::vector<Branch>& branches() const { return branches_; }
  double source_current() const { return dip_.i_dip(); }
  int probe_node() const { return kNode3; }

  std::vector<Branch>& mutable_branches() { return branches_; }

 private:
  HeadGeometry geom_;
  DipoleSource dip_;
  std::shared_ptr<const TissueSet> tissues_;
  CircuitParams params_;
  NetlistOptions opts_;
  std::vector<Branch> branches_;
};

inline Netlist build_netlist(const HeadGeometry& geom, const DipoleSource& dip,
                             std::shared_ptr<const TissueSet> tissues,
                             const CircuitParams& params,
                             const NetlistOptions& opts = {}) {
  params.validate();
  (void)ratios(geom, dip);  // validates dipole inside brain
  Netlist net(geom, dip, std::move(tissues), params, opts);
  const TissueSet& ts = net.tissues();

  const double g_skull =
      (1.0 / (4.0 * M_PI)) * (1.0 / geom.r_brain - 1.0 / geom.r_skull);
  const double g_scalp =
      (1.0 / (4.0 * M_PI)) * (1.0 / geom.r_skull - 1.0 / geom.r_scalp);
  const double g_air = 4.0 * M_PI * geom.r_scalp;
  const double g_brain = 1.0 / params.s_brain;

  auto& b = net.mutable_branches();
  int id = 0;
  b.push_back({id++, kNodeSrc, kNode1, BranchLayer::brain_up,
               g_brain / (1.0 - params.alpha), &ts.brain});
  b.push_back({id++, kNodeSrc, kGnd, BranchLayer::brain_down,
               g_brain / (1.0 + params.alpha), &ts.brain});
  b.push_back({id++, kNode1, kNode2, BranchLayer::skull_rad, 1.0 / g_skull,
               &ts.skull});
  b.push_back({id++, kNode2, kNode3, BranchLayer::scalp_rad, 1.0 / g_scalp,
               &ts.scalp});
  b.push_back({id++, kNode1, kGnd, BranchLayer::brain_tan,
               params.gamma_brain * g_brain, &ts.brain});
  b.push_back({id++, kNode2, kGnd, BranchLayer::skull_tan,
               params.gamma_skull / g_skull, &ts.skull});
  b.push_back({id++, kNode3, kGnd, BranchLayer::scalp_tan,
               params.gamma_scalp / g_scalp, &ts.scalp});
  if (opts.include_air_branch)
    b.push_back({id++, kNode3, kGnd, BranchLayer::air, g_air, &ts.air});
  return net;
}

struct NodalSolution {
  double frequency_hz = 0.0;
  std::array<std::complex<double>, kNumUnknowns> v{};  // NSRC, N1, N2, N3
  double kcl_residual = 0.0;  // ||Y*v - i||_inf / ||i||_inf

  std::complex<double> at(int node) const {
    if (node == kGnd) return 0.0;
    return v[static_cast<std::size_t>(node)];
  }
};

namespace detail {

// Dense complex Gaussian elimination with partial pivoting.
template <int N>
inline void solve_dense(std::array<std::array<std::complex<double>, N>, N>& a,
                        std::array<std::complex<double>, N>& rhs,
                        const std::string& context) {
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) == 0.0)
      throw SingularityError("circuit: singular admittance matrix, node " +
                             context + " " + node_name(col) + " is isolated");
    std::swap(a[col], a[piv]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = col + 1; r < N; ++r) {
      const std::complex<double> m = a[r][col] / a[col][col];
      if (m == std::complex<double>(0.0)) continue;
      for (int c = col; c < N; ++c) a[r][c] -= m * a[col][c];
      rhs[r] -= m * rhs[col];
    }
  }
  for (int r = N - 1; r >= 0; --r) {
    std::complex<double> acc = rhs[r];
    for (int c = r + 1; c < N; ++c) acc -= a[r][c] * rhs[c];
    rhs[r] = acc / a[r][r];
  }
}

}  // namespace detail

inline void stamp_admittance_matrix(
    const Netlist& net, double f,
    std::array<std::array<std::complex<double>, kNumUnknowns>, kNumUnknowns>& y) {
  for (auto& row : y) row.fill(0.0);
  for (const auto& br : net.branches()) {
    const std::complex<double> yb =
        br.admittance(f, net.options().impedance_scale);
    if (br.node_a != kGnd) y[br.node_a][br.node_a] += yb;
    if (br.node_b != kGnd) y[br.node_b][br.node_b] += yb;
    if (br.node_a != kGnd && br.node_b != kGnd) {
      y[br.node_a][br.node_b] -= yb;
      y[br.node_b][br.node_a] -= yb;
    }
  }
}

inline NodalSolution solve_nodal(const Netlist& net, double f) {
  if (!(f > 0.0)) throw DomainError("circuit: frequency must be > 0");
  std::array<std::array<std::complex<double>, kNumUnknowns>, kNumUnknowns> y;
  stamp_admittance_matrix(net, f, y);
  auto y0 = y;
  std::array<std::complex<double>, kNumUnknowns> rhs{};
  rhs[kNodeSrc] = net.source_current();
  detail::solve_dense<kNumUnknowns>(y, rhs, "");

  NodalSolution sol;
  sol.frequency_hz = f;
  sol.v = rhs;
  double res = 0.0;
  for (int r = 0; r < kNumUnknowns; ++r) {
    std::complex<double> acc = 0.0;
    for (int c = 0; c < kNumUnknowns; ++c) acc += y0[r][c] * sol.v[c];
    acc -= (r == kNodeSrc) ? std::complex<double>(net.source_current()) : 0.0;
    res = std::max(res, std::abs(acc));
  }
  const double inorm = std::abs(net.source_current());
  sol.kcl_residual = (inorm > 0.0) ? res / inorm : res;
  return sol;
}

inline std::complex<double> branch_current(const Netlist& net,
                                           const NodalSolution& sol,
                                           const Branch& br) {
  return br.admittance(sol.frequency_hz, net.options().impedance_scale) *
         (sol.at(br.node_a) - sol.at(br.node_b));
}

inline std::complex<double> scalp_peak_voltage(const HeadGeometry& geom,
                                               const DipoleSource& dip,
                                               std::shared_ptr<const TissueSet> tissues,
                                               const CircuitParams& params,
                                               double f,
                                               const NetlistOptions& opts = {}) {
  const Netlist net = build_netlist(geom, dip, std::move(tissues), params, opts);
  return solve_nodal(net, f).at(net.probe_node());
}

enum class Interface { brain_skull, skull_scalp };

// Interfacial surface-charge density equivalent, from normal-current
// continuity through the outward radial branch at the interface.
inline std::complex<double> surface_charge(const Netlist& net,
                                           const NodalSolution& sol,
                                           Interface iface) {
  if (!(sol.frequency_hz > 0.0))
    throw StateError("circuit: surface_charge requires a solved netlist");
  const double f = sol.frequency_hz;
  const BranchLayer radial = (iface == Interface::brain_skull)
                                 ? BranchLayer::skull_rad
                                 : BranchLayer::scalp_rad;
  const Branch* rb = nullptr;
  for (const auto& br : net.branches())
    if (br.layer == radial) rb = &br;
  if (!rb) throw StateError("circuit: radial branch not found");

  const double r_if = (iface == Interface::brain_skull)
                          ? net.geometry().r_brain
                          : net.geometry().r_skull;
  const std::complex<double> j_n =
      branch_current(net, sol, *rb) / (4.0 * M_PI * r_if * r_if);

  const TissueSpectrum& inner = (iface == Interface::brain_skull)
                                    ? net.tissues().brain
                                    : net.tissues().skull;
  const TissueSpectrum& outer = (iface == Interface::brain_skull)
                                    ? net.tissues().skull
                                    : net.tissues().scalp;
  const TissueSample si = inner.at(f);
  const TissueSample so = outer.at(f);
  const std::complex<double> sci = inner.complex_conductivity(f).value;
  const std::complex<double> sco = outer.complex_conductivity(f).value;
  return j_n * (so.eps_rel * kEps0 / sco - si.eps_rel * kEps0 / sci);
}

}  // namespace headcirc
