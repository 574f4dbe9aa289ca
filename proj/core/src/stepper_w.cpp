#include "kslab/stepper_w.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kslab/errors.hpp"
#include "kslab/numerics.hpp"

namespace kslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Nonlocal integrand kappa(sqrt s) w_s - 2^{p-1} mu(sqrt s) w_s^p at nodes,
// accumulated by cumulative trapezoid. sqrt(s_j) = r_j exactly by grid
// construction. The discrete w_s is clamped at 0 inside the p-power only.
std::vector<double> nonlocal_integral(const RadialGrid& grid,
                                      std::span<const double> ws,
                                      const ModelParams& params) {
  const double two_pm1 = std::pow(2.0, params.p - 1.0);
  std::vector<double> acc(grid.n_nodes());
  for (std::size_t j = 0; j < acc.size(); ++j) {
    const double r = grid.r[j];
    acc[j] = params.kappa(r) * ws[j] -
             two_pm1 * params.mu(r) * std::pow(std::max(ws[j], 0.0), params.p);
  }
  cumulative_trapezoid(grid.s, acc, acc);
  return acc;
}

std::vector<double> recover_clamped(const RadialGrid& grid,
                                    std::span<const double> w) {
  std::vector<double> u = derivative1(grid.s, w);
  for (double& x : u) x = std::max(0.0, 2.0 * x);
  return u;
}

}  // namespace

SimStateW make_state_w(const RadialGrid& grid, const FieldW& w0) {
  if (w0.size() != grid.n_nodes())
    throw DimensionError("make_state_w: w0/grid size mismatch");
  const double scale = std::max(1.0, std::abs(w0.back()));
  if (std::abs(w0[0]) > 1e-12 * scale)
    throw DomainError("make_state_w: w(0) must vanish");
  for (std::size_t j = 0; j + 1 < w0.size(); ++j)
    if (w0[j + 1] < w0[j] - 1e-9 * scale)
      throw DomainError("make_state_w: w must be nondecreasing");
  SimStateW state;
  state.w = w0;
  state.w.values[0] = 0.0;
  state.u = FieldU(recover_clamped(grid, state.w.values));
  state.m = 2.0 * kPi * state.w.back();
  state.m0 = state.m;
  state.linf = max_abs(state.u.values);
  return state;
}

std::vector<double> rhs_w(const SimStateW& state, const ModelParams& params,
                          const RadialGrid& grid) {
  const std::size_t n = grid.n_nodes();
  if (state.w.size() != n)
    throw DimensionError("rhs_w: state/grid size mismatch");
  const auto& w = state.w.values;
  const auto& s = grid.s;
  const std::vector<double> ws = derivative1(s, w);
  const std::vector<double> wss = derivative2(s, w);
  const std::vector<double> nl = nonlocal_integral(grid, ws, params);
  const double mass_rate = state.m / params.area;

  std::vector<double> out(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j)
    out[j] = 4.0 * s[j] * wss[j] + (2.0 * w[j] - mass_rate * s[j]) * ws[j] +
             nl[j];
  out[n - 1] = nl[n - 1];
  return out;
}

StepAttempt step_w(SimStateW& state, const ModelParams& params,
                   const RadialGrid& grid, double dt,
                   const StepControls& controls) {
  if (!(dt > 0.0)) throw DomainError("step_w: dt must be positive");
  const std::size_t n = grid.n_nodes();
  if (state.w.size() != n)
    throw DimensionError("step_w: state/grid size mismatch");
  const auto& w = state.w.values;
  const auto& s = grid.s;
  const std::vector<double> ws_c = derivative1(s, w);
  const std::vector<double> nl = nonlocal_integral(grid, ws_c, params);
  const double mass_rate = state.m / params.area;

  // Boundary node first: mass law, explicit.
  const double w_end = w[n - 1] + dt * nl[n - 1];

  // Interior: explicit upwinded advection + nonlocal, implicit diffusion.
  const std::size_t ni = n - 2;  // unknowns w_1 .. w_{n-2}
  std::vector<double> rhs(ni), diag(ni), lower(ni - 1), upper(ni - 1);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double hm = s[j] - s[j - 1];
    const double hp = s[j + 1] - s[j];
    const double coef = 2.0 * w[j] - mass_rate * s[j];
    // information travels toward smaller s when coef > 0
    const double ws_up =
        coef > 0.0 ? (w[j + 1] - w[j]) / hp : (w[j] - w[j - 1]) / hm;
    const std::size_t i = j - 1;
    rhs[i] = w[j] + dt * (coef * ws_up + nl[j]);

    const double denom = hm * hp * (hm + hp);
    const double k = dt * 4.0 * s[j] * 2.0 / denom;  // times the D2 stencil
    const double cl = k * hp;                        // on w_{j-1}
    const double cu = k * hm;                        // on w_{j+1}
    diag[i] = 1.0 + cl + cu;
    if (j > 1) lower[i - 1] = -cl;  // j == 1 couples to w_0 = 0
    if (j + 2 < n)
      upper[i] = -cu;
    else
      rhs[i] += cu * w_end;  // Dirichlet coupling to the advanced boundary
  }
  solve_tridiagonal(lower, diag, upper, rhs);

  StepAttempt att;
  std::vector<double> w_new(n);
  w_new[0] = 0.0;
  std::copy(rhs.begin(), rhs.end(), w_new.begin() + 1);
  w_new[n - 1] = w_end;
  if (!all_finite(w_new)) {
    att.reject_reason = "nonfinite";
    return att;
  }
  const double tol_mono = 1e-11 * std::max(1.0, std::abs(w_end));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (w_new[j + 1] < w_new[j] - tol_mono) {
      att.reject_reason = "monotone";
      return att;
    }
  }
  const std::vector<double> u_new = recover_clamped(grid, w_new);
  const double linf_new = max_abs(u_new);
  double max_change = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    max_change = std::max(max_change, std::abs(u_new[j] - state.u[j]));
  att.rel_change = max_change / std::max(state.linf, 1e-30);
  if (linf_new > controls.growth_reject_factor * state.linf + 1e-300) {
    att.reject_reason = "growth";
    return att;
  }

  state.w.values = std::move(w_new);
  state.u.values = u_new;
  state.m = 2.0 * kPi * state.w.back();
  state.linf = linf_new;
  state.t += dt;
  state.dt = dt;
  ++state.step_count;
  att.accepted = true;
  return att;
}

double explicit_dt_limit_w(const SimStateW& state, const ModelParams& params,
                           const RadialGrid& grid) {
  const std::size_t n = grid.n_nodes();
  const double mass_rate = state.m / params.area;
  double limit = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double coef = std::abs(2.0 * state.w[j] - mass_rate * grid.s[j]);
    if (coef > 0.0) {
      const double h = std::min(grid.s[j] - grid.s[j - 1],
                                grid.s[j + 1] - grid.s[j]);
      limit = std::min(limit, h / coef);
    }
  }
  return limit;
}

RunRecord run_w(const FieldW& w0, const ModelParams& params,
                const RadialGrid& grid, double t_end,
                const StepControls& controls, const RunOptionsW& options) {
  if (!(t_end >= 0.0)) throw DomainError("run_w: t_end must be nonnegative");
  SimStateW state = make_state_w(grid, w0);
  RunRecord rec;
  rec.peak_linf = state.linf;

  const auto emit = [&](const SimStateW& st) {
    if (!rec.snapshots.empty() && rec.snapshots.back().t == st.t) return;
    Snapshot snap;
    snap.t = st.t;
    snap.dt = st.dt;
    snap.m = st.m;
    snap.linf_u = st.linf;
    snap.u = st.u.values;
    snap.w = st.w.values;
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
        c.cfl_safety * explicit_dt_limit_w(state, params, grid);
    const double dt_try = std::max(std::min(dt, cap), c.dt_min);
    const StepAttempt att = step_w(state, params, grid, dt_try, c);
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
