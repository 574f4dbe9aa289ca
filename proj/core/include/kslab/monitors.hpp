#pragma once

#include <span>
#include <string>

#include "kslab/fields.hpp"
#include "kslab/grid.hpp"
#include "kslab/model.hpp"

namespace kslab {

// One inequality checked at one instant, reduced to its worst grid node.
// pass means lhs <= rhs + the monitor's slack; margin = rhs - lhs.
struct MonitorReport {
  std::string name;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

// 0 <= m <= m0 e^{kappa1 t}, with 1e-6 relative headroom above and a tiny
// absolute tolerance below.
MonitorReport check_mass_bound(double m, double t, double m0, double kappa1);

// w_s(s, t) <= m0 e^{kappa1 t} / (2 pi s), checked with centered differences
// at nodes s_j >= 4 * (first interior spacing); the excluded head is where the
// 1/s singularity is not resolvable. 1% relative headroom.
MonitorReport check_ws_bound(const RadialGrid& grid, const FieldW& w, double t,
                             double m0, double kappa1);

// u_{j+1} <= u_j + 1e-8 ||u||_inf for all j (discrete u_r <= 0).
MonitorReport check_radial_monotonicity(const FieldU& u, double t);

// -v_rr <= u at every node, slack 10 h max(1, ||u||_inf).
MonitorReport check_vrr_bound(const RadialGrid& grid, const FieldU& u,
                              std::span<const double> vrr, double t);

// Static majorant wbar(s) = a s / (b + s) for the subcritical regime.
struct Supersolution {
  double a = 0.0;  // in (m0 / 2pi, 4)
  double b = 0.0;  // > 0
  double evaluate(double s) const { return a * s / (b + s); }
};

// a = (m0/(2 pi) + 4)/2; b halved from R^2 until wbar >= w0 at every node
// (at most 200 halvings). Requires m0 < 8 pi so the a-interval is nonempty.
Supersolution select_supersolution(const RadialGrid& grid, double m0,
                                   const FieldW& w0);

// Supersolution property of wbar for the kappa == 0 dynamics: the leading
// term (8 - 2a) a b s / (b + s)^3 must be nonnegative (equivalently a <= 4);
// the margin reports the minimum over nodes of the full negated residual,
// with the mass term taken at the smallest mass in m_series.
MonitorReport check_supersolution_residual(const RadialGrid& grid,
                                           const Supersolution& sup,
                                           const ModelParams& params,
                                           std::span<const double> m_series);

// Pointwise ordering w <= wbar + 1e-6 a at every node.
MonitorReport check_supersolution_ordering(const RadialGrid& grid,
                                           const FieldW& w,
                                           const Supersolution& sup, double t);

}  // namespace kslab
