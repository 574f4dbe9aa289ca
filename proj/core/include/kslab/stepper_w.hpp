#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kslab/fields.hpp"
#include "kslab/grid.hpp"
#include "kslab/model.hpp"
#include "kslab/stepper_u.hpp"
#include "kslab/stepping.hpp"

namespace kslab {

struct SimStateW {
  double t = 0.0;
  double dt = 0.0;  // last accepted step
  double m = 0.0;   // 2 pi w(R^2), exact by construction
  double m0 = 0.0;
  double linf = 0.0;  // of the recovered density
  std::uint64_t step_count = 0;
  FieldW w;
  FieldU u;  // recovered density, kept in sync with w
};

// Validates w0(0) = 0 and monotonicity, recovers the density.
SimStateW make_state_w(const RadialGrid& grid, const FieldW& w0);

// Tendency of the scalar mass-coordinate equation at every node:
//   4 s w_ss + (2w - (m/|Omega|) s) w_s + \int_0^s (kappa w_s - 2^{p-1} mu w_s^p)
// with centered differences; node 0 is pinned (w(0) = 0), node N follows the
// mass law (the advection coefficient cancels at s = R^2 and w_ss(R^2) = 0
// under the Neumann condition, leaving the nonlocal term).
std::vector<double> rhs_w(const SimStateW& state, const ModelParams& params,
                          const RadialGrid& grid);

// One IMEX step: degenerate diffusion 4 s w_ss implicit (tridiagonal on the
// interior, w(0) = 0 Dirichlet, w(R^2) advanced first by the mass law),
// upwinded advection and the nonlocal integral explicit. Rejects on
// monotonicity loss ("monotone"), recovered-density growth ("growth") or
// non-finite values ("nonfinite").
StepAttempt step_w(SimStateW& state, const ModelParams& params,
                   const RadialGrid& grid, double dt,
                   const StepControls& controls);

// Advective CFL bound of the current state, before the safety factor.
double explicit_dt_limit_w(const SimStateW& state, const ModelParams& params,
                           const RadialGrid& grid);

struct RunOptionsW {
  double snapshot_interval = 0.0;  // 0 -> t_end / 100
  std::uint64_t max_steps = 5'000'000;
  std::size_t max_snapshots = 20'000;  // memory guard; exceeding stops the run
  std::function<std::optional<std::string>(const SimStateW&,
                                           const StepHistory&)>
      stop_check;
};

RunRecord run_w(const FieldW& w0, const ModelParams& params,
                const RadialGrid& grid, double t_end,
                const StepControls& controls = {},
                const RunOptionsW& options = {});

}  // namespace kslab
