#include "kslab/stepper_u.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kslab/elliptic.hpp"
#include "kslab/errors.hpp"
#include "kslab/numerics.hpp"
#include "kslab/transform.hpp"

namespace kslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Annular cell volumes (per radian, i.e. \int r dr over the cell) and face
// radii. Interior volume r_j dr; the end cells are half cells closed by the
// domain boundary.
struct FvGeometry {
  std::vector<double> face_r;  // size n-1, between nodes j and j+1
  std::vector<double> vol;     // size n
};

FvGeometry fv_geometry(const RadialGrid& grid) {
  const std::size_t n = grid.n_nodes();
  const double dr = grid.dr;
  FvGeometry g;
  g.face_r.resize(n - 1);
  g.vol.resize(n);
  for (std::size_t j = 0; j + 1 < n; ++j)
    g.face_r[j] = 0.5 * (grid.r[j] + grid.r[j + 1]);
  g.vol[0] = dr * dr / 8.0;
  for (std::size_t j = 1; j + 1 < n; ++j) g.vol[j] = grid.r[j] * dr;
  g.vol[n - 1] = 0.5 * dr * (grid.R - 0.25 * dr);
  return g;
}

// Advective face fluxes A_f = r_f * u_upwind * vr_f, upwinded on the face
// velocity (mean of the node values). Boundary faces carry no flux.
std::vector<double> advective_fluxes(const SimStateU& state,
                                     const FvGeometry& g) {
  const std::size_t n = state.u.size();
  std::vector<double> flux(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = 0.5 * (state.v.vr[j] + state.v.vr[j + 1]);
    const double upwind = a > 0.0 ? state.u[j] : state.u[j + 1];
    flux[j] = g.face_r[j] * upwind * a;
  }
  return flux;
}

double reaction(const ModelParams& params, double r, double u) {
  return params.kappa(r) * u - params.mu(r) * std::pow(u, params.p);
}

}  // namespace

SimStateU make_state_u(const RadialGrid& grid, const FieldU& u0) {
  if (u0.size() != grid.n_nodes())
    throw DimensionError("make_state_u: u0/grid size mismatch");
  for (std::size_t j = 0; j < u0.size(); ++j)
    if (!(u0[j] >= 0.0))
      throw DomainError("make_state_u: initial density must be nonnegative");
  SimStateU state;
  state.u = u0;
  const FieldW w = forward_transform(grid, u0);
  state.m = total_mass(w);
  state.m0 = state.m;
  state.v = solve_field_v(grid, w, state.m);
  state.linf = max_abs(u0.values);
  return state;
}

std::vector<double> rhs_u(const SimStateU& state, const ModelParams& params,
                          const RadialGrid& grid) {
  const std::size_t n = grid.n_nodes();
  if (state.u.size() != n || state.v.vr.size() != n)
    throw DimensionError("rhs_u: state/grid size mismatch");
  const FvGeometry g = fv_geometry(grid);
  const std::vector<double> adv = advective_fluxes(state, g);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double diff_right =
        j + 1 < n ? g.face_r[j] * (state.u[j + 1] - state.u[j]) / grid.dr : 0.0;
    const double diff_left =
        j > 0 ? g.face_r[j - 1] * (state.u[j] - state.u[j - 1]) / grid.dr : 0.0;
    const double adv_right = j + 1 < n ? adv[j] : 0.0;
    const double adv_left = j > 0 ? adv[j - 1] : 0.0;
    out[j] = ((diff_right - adv_right) - (diff_left - adv_left)) / g.vol[j] +
             reaction(params, grid.r[j], state.u[j]);
  }
  return out;
}

StepAttempt step_u(SimStateU& state, const ModelParams& params,
                   const RadialGrid& grid, double dt,
                   const StepControls& controls) {
  if (!(dt > 0.0)) throw DomainError("step_u: dt must be positive");
  const std::size_t n = grid.n_nodes();
  if (state.u.size() != n)
    throw DimensionError("step_u: state/grid size mismatch");
  const FvGeometry g = fv_geometry(grid);
  const std::vector<double> adv = advective_fluxes(state, g);

  std::vector<double> rhs(n), diag(n), lower(n - 1), upper(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double adv_right = j + 1 < n ? adv[j] : 0.0;
    const double adv_left = j > 0 ? adv[j - 1] : 0.0;
    rhs[j] = state.u[j] +
             dt * (-(adv_right - adv_left) / g.vol[j] +
                   reaction(params, grid.r[j], state.u[j]));
    double d = 1.0;
    if (j + 1 < n) {
      const double c = dt * g.face_r[j] / (g.vol[j] * grid.dr);
      d += c;
      upper[j] = -c;
    }
    if (j > 0) {
      const double c = dt * g.face_r[j - 1] / (g.vol[j] * grid.dr);
      d += c;
      lower[j - 1] = -c;
    }
    diag[j] = d;
  }
  solve_tridiagonal(lower, diag, upper, rhs);

  StepAttempt att;
  if (!all_finite(rhs)) {
    att.reject_reason = "nonfinite";
    return att;
  }
  double clipped = 0.0;
  double linf_new = 0.0;
  double max_change = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (rhs[j] < 0.0) {
      clipped += -rhs[j] * g.vol[j];
      rhs[j] = 0.0;
    }
    linf_new = std::max(linf_new, rhs[j]);
    max_change = std::max(max_change, std::abs(rhs[j] - state.u[j]));
  }
  att.clipped_mass = 2.0 * kPi * clipped;
  att.rel_change = max_change / std::max(state.linf, 1e-30);
  if (att.clipped_mass >
      controls.clip_mass_fraction * std::max(state.m0, 1e-30)) {
    att.reject_reason = "clip";
    return att;
  }
  if (linf_new > controls.growth_reject_factor * state.linf + 1e-300) {
    att.reject_reason = "growth";
    return att;
  }

  state.u.values = std::move(rhs);
  const FieldW w = forward_transform(grid, state.u);
  state.m = total_mass(w);
  state.v = solve_field_v(grid, w, state.m);
  state.linf = linf_new;
  state.t += dt;
  state.dt = dt;
  state.clipped_mass = att.clipped_mass;
  ++state.step_count;
  att.accepted = true;
  return att;
}

double explicit_dt_limit_u(const SimStateU& state, const ModelParams& params,
                           const RadialGrid& grid) {
  const std::size_t n = grid.n_nodes();
  double limit = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = std::abs(0.5 * (state.v.vr[j] + state.v.vr[j + 1]));
    if (a > 0.0) limit = std::min(limit, grid.dr / a);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double rate =
        std::abs(params.kappa(grid.r[j]) -
                 params.p * params.mu(grid.r[j]) *
                     std::pow(state.u[j], params.p - 1.0));
    if (rate > 0.0) limit = std::min(limit, 1.0 / rate);
  }
  return limit;
}

RunRecord run_u(const FieldU& u0, const ModelParams& params,
                const RadialGrid& grid, double t_end,
                const StepControls& controls, const RunOptionsU& options) {
  if (!(t_end >= 0.0)) throw DomainError("run_u: t_end must be nonnegative");
  SimStateU state = make_state_u(grid, u0);
  RunRecord rec;
  rec.peak_linf = state.linf;

  const auto emit = [&](const SimStateU& st) {
    if (!rec.snapshots.empty() && rec.snapshots.back().t == st.t) return;
    Snapshot snap;
    snap.t = st.t;
    snap.dt = st.dt;
    snap.m = st.m;
    snap.linf_u = st.linf;
    snap.u = st.u.values;
    snap.w = forward_transform(grid, st.u).values;
    rec.snapshots.push_back(std::move(snap));
  };
  emit(state);
  if (t_end == 0.0) return rec;

  const StepControls c = controls.resolved(t_end);
  const double interval =
      options.snapshot_interval > 0.0 ? options.snapshot_interval : t_end / 100.0;
  const double t_eps = 1e-12 * t_end;
  double next_snap = interval;
  double dt = c.dt_init;
  StepHistory hist(64);

  while (state.t < t_end - t_eps) {
    if (rec.steps_accepted + rec.steps_rejected >= options.max_steps) {
      rec.outcome = RunOutcome::Stopped;
      rec.detail = "step budget exhausted";
      break;
    }
    dt = std::min({dt, c.dt_max, t_end - state.t});
    const double cap =
        c.cfl_safety * explicit_dt_limit_u(state, params, grid);
    const double dt_try = std::max(std::min(dt, cap), c.dt_min);
    const StepAttempt att = step_u(state, params, grid, dt_try, c);
    if (!att.accepted) {
      ++rec.steps_rejected;
      if (dt_try <= c.dt_min * (1.0 + 1e-9)) {
        if (att.reject_reason == "nonfinite") {
          rec.outcome = RunOutcome::NumericalFailure;
          rec.detail = "non-finite values at dt_min";
        } else {
          rec.outcome = RunOutcome::DtUnderflow;
          rec.detail = "step rejected at dt_min (" + att.reject_reason + ")";
        }
        break;
      }
      dt = 0.5 * dt_try;
      continue;
    }
    ++rec.steps_accepted;
    const StepPoint pt{state.t, dt_try, state.linf, state.m,
                       dt_try <= c.dt_min * (1.0 + 1e-9)};
    hist.push(pt);
    rec.series.push_back(pt);
    rec.peak_linf = std::max(rec.peak_linf, state.linf);
    if (state.t >= next_snap - t_eps) {
      if (rec.snapshots.size() >= options.max_snapshots) {
        rec.outcome = RunOutcome::Stopped;
        rec.detail = "snapshot budget exhausted";
        break;
      }
      emit(state);
      while (next_snap <= state.t + t_eps) next_snap += interval;
    }
    if (options.stop_check) {
      if (auto why = options.stop_check(state, hist)) {
        rec.outcome = RunOutcome::Stopped;
        rec.detail = *why;
        break;
      }
    }
    dt = std::clamp(controller_next_dt(dt_try, att.rel_change, c), c.dt_min,
                    c.dt_max);
  }
  rec.t_final = state.t;
  emit(state);
  return rec;
}

}  // namespace kslab
