#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kslab/errors.hpp"
#include "kslab/grid.hpp"
#include "kslab/initdata.hpp"
#include "kslab/model.hpp"
#include "kslab/monitors.hpp"
#include "kslab/stepper_u.hpp"
#include "kslab/stepper_w.hpp"
#include "kslab/transform.hpp"

using namespace kslab;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams params_with(CoefficientFn kappa, CoefficientFn mu,
                        double p = 2.0) {
  return ModelParams::make(1.0, p, 2.0, 1.0, kappa, mu);
}

FieldW homogeneous_w(const RadialGrid& g, double c) {
  FieldW w(g.n_nodes());
  for (std::size_t j = 0; j < g.n_nodes(); ++j) w[j] = 0.5 * c * g.s[j];
  return w;
}

FieldU bump(const RadialGrid& g, double m0) {
  BumpSpec spec;
  spec.m0 = m0;
  spec.r1 = 0.2;
  spec.m_tilde = 0.5 * m0;
  return build_initial_data(g, spec);
}

}  // namespace

TEST_SUITE("stepper_w") {

TEST_CASE("make_state_w validates the profile") {
  const auto g = RadialGrid::make(64, 1.0);
  FieldW ok = homogeneous_w(g, 2.0);
  const auto st = make_state_w(g, ok);
  CHECK(st.m == doctest::Approx(2.0 * kPi * ok.back()).epsilon(1e-15));

  FieldW bad0 = ok;
  bad0[0] = 0.5;
  CHECK_THROWS_AS(make_state_w(g, bad0), DomainError);

  FieldW dec = ok;
  dec[10] = dec[9] - 0.1;
  CHECK_THROWS_AS(make_state_w(g, dec), DomainError);
}

TEST_CASE("homogeneous profile annihilates the tendency") {
  const auto g = RadialGrid::make(128, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::constant(0.0));
  const double c = 2.0;
  auto st = make_state_w(g, homogeneous_w(g, c));
  const auto tend = rhs_w(st, params, g);
  for (double v : tend) CHECK(std::abs(v) <= 1e-11 * c);

  for (double dt : {1e-4, 1e-3}) {
    auto probe = st;
    const auto att = step_w(probe, params, g, dt, StepControls{});
    CHECK(att.accepted);
    for (std::size_t j = 0; j < g.n_nodes(); ++j)
      CHECK(probe.w[j] ==
            doctest::Approx(0.5 * c * g.s[j]).epsilon(1e-10));
  }
}

TEST_CASE("zero profile stays zero") {
  const auto g = RadialGrid::make(64, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::power(1.0, 2.0));
  auto st = make_state_w(g, FieldW(g.n_nodes(), 0.0));
  const auto tend = rhs_w(st, params, g);
  for (double v : tend) CHECK(v == 0.0);
}

TEST_CASE("boundary mass follows the exponential law") {
  const auto g = RadialGrid::make(64, 1.0);
  const double k = 0.5;
  const auto params = params_with(CoefficientFn::constant(k),
                                  CoefficientFn::constant(0.0));
  const auto w0 = forward_transform(g, FieldU(g.n_nodes(), 2.0));
  const auto rec = run_w(w0, params, g, 1.0);
  CHECK(rec.outcome == RunOutcome::Completed);
  const double target = w0.back() * std::exp(k);
  CHECK(std::abs(rec.snapshots.back().w.back() - target) <= 0.01 * target);
}

TEST_CASE("mass coordinate is conserved exactly without reaction") {
  const auto g = RadialGrid::make(128, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::constant(0.0));
  const auto w0 = forward_transform(g, bump(g, 0.9 * 8.0 * kPi));
  const auto rec = run_w(w0, params, g, 0.2);
  CHECK(rec.outcome == RunOutcome::Completed);
  for (const auto& pt : rec.series)
    CHECK(pt.m == doctest::Approx(rec.series.front().m).epsilon(1e-12));
}

TEST_CASE("zero horizon returns the initial profile with recovered density") {
  const auto g = RadialGrid::make(64, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::power(1.0, 2.0));
  const auto w0 = forward_transform(g, bump(g, 8.0 * kPi));
  const auto rec = run_w(w0, params, g, 0.0);
  CHECK(rec.outcome == RunOutcome::Completed);
  REQUIRE(rec.snapshots.size() == 1);
  CHECK(rec.snapshots[0].t == 0.0);
  for (std::size_t j = 0; j < g.n_nodes(); ++j)
    CHECK(rec.snapshots[0].w[j] == w0[j]);
  CHECK(!rec.snapshots[0].u.empty());
}

TEST_CASE("tendency agrees with the transformed primitive tendency") {
  // The two formulations describe one dynamics: d/dt w(s_j) must match the
  // cumulative integral of the primitive tendency, with the gap shrinking
  // under refinement.
  const auto params = params_with(CoefficientFn::constant(0.2),
                                  CoefficientFn::power(1.0, 2.0));
  double prev_err = 0.0;
  double prev_scale = 1.0;
  for (std::size_t n : {256, 512, 1024}) {
    const auto g = RadialGrid::make(n, 1.0);
    FieldU u0(g.n_nodes());
    for (std::size_t j = 0; j < g.n_nodes(); ++j)
      u0[j] = 4.0 * std::exp(-4.0 * g.r[j] * g.r[j]);
    const auto su = make_state_u(g, u0);
    const auto du = rhs_u(su, params, g);
    const auto dw_expected = radial_cumulative_integral(g, du);

    const auto sw = make_state_w(g, forward_transform(g, u0));
    const auto dw = rhs_w(sw, params, g);

    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < g.n_nodes(); ++j) {
      err = std::max(err, std::abs(dw[j] - dw_expected[j]));
      scale = std::max(scale, std::abs(dw_expected[j]));
    }
    if (n > 256) CHECK(err <= 0.7 * prev_err + 1e-12);
    prev_err = err;
    prev_scale = scale;
  }
  CHECK(prev_err <= 0.05 * prev_scale);
}

TEST_CASE("recovered density tracks the primitive solver") {
  const auto g = RadialGrid::make(256, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::power(1.0, 2.0));
  const auto u0 = bump(g, 0.9 * 8.0 * kPi);
  const double t_end = 0.2;

  const auto rec_u = run_u(u0, params, g, t_end);
  const auto rec_w = run_w(forward_transform(g, u0), params, g, t_end);
  CHECK(rec_u.outcome == RunOutcome::Completed);
  CHECK(rec_w.outcome == RunOutcome::Completed);

  const auto& uu = rec_u.snapshots.back().u;
  const auto& uw = rec_w.snapshots.back().u;
  double scale = 0.0, gap = 0.0;
  for (std::size_t j = 0; j < g.n_nodes(); ++j) {
    scale = std::max(scale, std::abs(uu[j]));
    gap = std::max(gap, std::abs(uu[j] - uw[j]));
  }
  CHECK(gap <= 1e-2 * scale);
}

TEST_CASE("subcritical trajectory stays under its supersolution") {
  const auto g = RadialGrid::make(128, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::power(1.0, 2.0));
  const double m0 = 0.9 * 8.0 * kPi;
  const auto w0 = forward_transform(g, bump(g, m0));
  const auto sup = select_supersolution(g, m0, w0);

  const auto rec = run_w(w0, params, g, 1.0);
  CHECK(rec.outcome == RunOutcome::Completed);
  for (const auto& snap : rec.snapshots) {
    FieldW w(snap.w);
    CHECK(check_supersolution_ordering(g, w, sup, snap.t).pass);
  }
}

TEST_CASE("absurd steps are rejected, state left intact") {
  const auto g = RadialGrid::make(64, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::power(1.0, 2.0));
  auto st = make_state_w(g, forward_transform(g, bump(g, 2.0 * 8.0 * kPi)));
  const auto before = st.w.values;
  const auto att = step_w(st, params, g, 1e8, StepControls{});
  CHECK(!att.accepted);
  CHECK(!att.reject_reason.empty());
  for (std::size_t j = 0; j < g.n_nodes(); ++j)
    CHECK(st.w[j] == before[j]);
}

TEST_CASE("explicit step limit is positive and finite") {
  const auto g = RadialGrid::make(64, 1.0);
  const auto params = params_with(CoefficientFn::constant(0.0),
                                  CoefficientFn::power(1.0, 2.0));
  const auto st = make_state_w(g, forward_transform(g, bump(g, 8.0 * kPi)));
  const double cap = explicit_dt_limit_w(st, params, g);
  CHECK(cap > 0.0);
  CHECK(std::isfinite(cap));
}

}  // TEST_SUITE
