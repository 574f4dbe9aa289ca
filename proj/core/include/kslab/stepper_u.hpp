#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kslab/fields.hpp"
#include "kslab/grid.hpp"
#include "kslab/model.hpp"
#include "kslab/stepping.hpp"

namespace kslab {

struct SimStateU {
  double t = 0.0;
  double dt = 0.0;  // last accepted step
  double m = 0.0;
  double m0 = 0.0;
  double linf = 0.0;
  std::uint64_t step_count = 0;
  double clipped_mass = 0.0;  // clipped on the last accepted step
  FieldU u;
  FieldV v;
};

// Validates u0 >= 0, solves the chemical, records the initial mass.
SimStateU make_state_u(const RadialGrid& grid, const FieldU& u0);

// Full explicit tendency on annular finite-volume cells: face flux
// F = r (u_r - u v_r) with first-order upwind for the advective part,
// divergence (F_{j+1/2} - F_{j-1/2}) / V_j, plus reaction kappa u - mu u^p.
// Zero-flux faces at r = 0 and r = R.
std::vector<double> rhs_u(const SimStateU& state, const ModelParams& params,
                          const RadialGrid& grid);

struct StepAttempt {
  bool accepted = false;
  double rel_change = 0.0;   // peak |du| / ||u||_inf over the step
  double clipped_mass = 0.0;
  std::string reject_reason;  // "growth", "clip" or "nonfinite"; empty if accepted
};

// One IMEX step: diffusion implicit (tridiagonal), advection and reaction
// explicit. Accepted steps advance the state and re-solve the chemical;
// rejected steps leave it untouched. Rejection reasons: peak growth beyond
// controls.growth_reject_factor, clipped negative mass beyond
// controls.clip_mass_fraction * m0, or non-finite values.
StepAttempt step_u(SimStateU& state, const ModelParams& params,
                   const RadialGrid& grid, double dt,
                   const StepControls& controls);

// Largest dt the explicit terms tolerate (advection CFL, reaction rate),
// before the safety factor.
double explicit_dt_limit_u(const SimStateU& state, const ModelParams& params,
                           const RadialGrid& grid);

struct RunOptionsU {
  double snapshot_interval = 0.0;  // 0 -> t_end / 100
  std::uint64_t max_steps = 5'000'000;
  std::size_t max_snapshots = 20'000;  // memory guard; exceeding stops the run
  // Called after every accepted step; a returned string stops the run with
  // outcome Stopped and that string as detail.
  std::function<std::optional<std::string>(const SimStateU&,
                                           const StepHistory&)>
      stop_check;
};

RunRecord run_u(const FieldU& u0, const ModelParams& params,
                const RadialGrid& grid, double t_end,
                const StepControls& controls = {},
                const RunOptionsU& options = {});

}  // namespace kslab
