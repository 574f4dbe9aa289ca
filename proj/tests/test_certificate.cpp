#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kslab/certificate.hpp"
#include "kslab/errors.hpp"
#include "kslab/grid.hpp"
#include "kslab/model.hpp"

#include "test_support.hpp"

using namespace kslab;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams canonical_params() {
  return ModelParams::make(1.0, 2.0, 2.0, 1.0, CoefficientFn::constant(0.0),
                           CoefficientFn::power(1.0, 2.0));
}

// Re-evaluates every inequality a certificate records. Slack is relative.
void check_certificate_inequalities(const Certificate& c, double rel = 1e-12) {
  const auto& k = c.coeffs;
  const double phi0 = k.phi0;
  CHECK((1.0 - c.epsilon) * (1.0 - c.epsilon) * c.f_value >= 1.0 - rel);
  CHECK(c.epsilon / 3.0 * phi0 >= k.c2 / k.c1 * (1.0 - rel));
  const double third = c.epsilon / 3.0 * phi0;
  CHECK(third * third >= k.c31 / k.c1 * (1.0 - rel));
  const double main_part = (1.0 - c.epsilon) * phi0;
  CHECK(main_part * main_part >= k.c32 / k.c1 * (1.0 - rel));
  CHECK(third >= 2.0 / (k.c1 * c.T_tilde) * (1.0 - rel));
  CHECK(phi0 >= c.threshold * (1.0 - rel));
}

}  // namespace

TEST_SUITE("certificate") {

TEST_CASE("moment of the zero state vanishes") {
  const auto g = RadialGrid::make(64, 1.0);
  FieldW w(g.n_nodes(), 0.0);
  CHECK(moment_phi(g, w, MomentConfig{0.5, 2.0}) == 0.0);
}

TEST_CASE("moment of a constant w with beta = 1 is W s0^2 / 2") {
  const auto g = RadialGrid::make(256, 1.0);
  const double W = 2.5, s0 = 0.5;
  FieldW w(g.n_nodes(), W);
  const double phi = moment_phi(g, w, MomentConfig{s0, 1.0});
  CHECK(phi == doctest::Approx(W * s0 * s0 / 2.0).epsilon(1e-13));
}

TEST_CASE("moment of the homogeneous profile matches the symbolic integral") {
  const auto g = RadialGrid::make(1024, 1.0);
  const double c = 2.0, s0 = 0.5, beta = 2.0;
  FieldW w(g.n_nodes());
  for (std::size_t j = 0; j < g.n_nodes(); ++j) w[j] = 0.5 * c * g.s[j];
  const double phi = moment_phi(g, w, MomentConfig{s0, beta});
  const double exact =
      0.5 * c * std::pow(s0, beta + 2.0) / ((beta + 1.0) * (beta + 2.0));
  CHECK(phi == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("moment rejects s0 beyond the domain") {
  const auto g = RadialGrid::make(64, 1.0);
  FieldW w(g.n_nodes(), 0.0);
  CHECK_THROWS_AS(moment_phi(g, w, MomentConfig{1.5, 2.0}), DomainError);
}

TEST_CASE("phi0_lower_bound substitutions") {
  const double beta = 3.0;
  CHECK(phi0_lower_bound(2.0 * kPi * (beta + 1.0), 0.0, beta, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(phi0_lower_bound(8.0 * kPi, 0.5, 1.0, 0.1) ==
        doctest::Approx(0.005).epsilon(1e-14));
  CHECK_THROWS_AS(phi0_lower_bound(1.0, 1.0, 2.0, 0.1), DomainError);
  CHECK_THROWS_AS(phi0_lower_bound(-1.0, 0.0, 2.0, 0.1), DomainError);
}

TEST_CASE("ode_coefficients reproduces the hand-evaluated quintuple") {
  const auto params = canonical_params();
  const double m0 = 16.0 * kPi;
  const auto k = ode_coefficients(params, m0, MomentConfig{0.1, 2.0},
                                  /*eta=*/0.5, /*T_tilde=*/0.5,
                                  /*m_tilde=*/12.0 * kPi, /*lambda=*/0.25);
  CHECK(k.c1 == doctest::Approx(4.0e4).epsilon(1e-12));
  CHECK(k.c2 == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(k.c31 == doctest::Approx(64.0 / 3.0 * 1e-4).epsilon(1e-12));
  CHECK(k.c32 == doctest::Approx(0.32).epsilon(1e-12));
  CHECK(k.phi0 == doctest::Approx(8.4375e-4).epsilon(1e-12));
}

TEST_CASE("ode_coefficients scales linearly in (1 - eta)") {
  const auto params = canonical_params();
  const double m0 = 16.0 * kPi;
  const auto a = ode_coefficients(params, m0, MomentConfig{0.1, 2.0}, 0.5, 0.5,
                                  12.0 * kPi, 0.25);
  const auto b = ode_coefficients(params, m0, MomentConfig{0.1, 2.0}, 0.75, 0.5,
                                  12.0 * kPi, 0.25);
  CHECK(b.c1 == doctest::Approx(0.5 * a.c1).epsilon(1e-13));
}

TEST_CASE("ode_coefficients with p = 1 reduces c2 to mu1") {
  ModelParams p;  // assembled directly: make() enforces p > 1 for the PDE
  p.R = 1.0;
  p.p = 1.0;
  p.mu1 = 7.0;
  p.kappa1 = 0.0;
  p.area = kPi;
  const auto k =
      ode_coefficients(p, 4.0 * kPi, MomentConfig{0.1, 2.0}, 0.5, 0.5,
                       2.0 * kPi, 0.25);
  CHECK(k.c2 == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("ode_coefficients validates its domain") {
  const auto params = canonical_params();
  const double m0 = 16.0 * kPi;
  CHECK_THROWS_AS(ode_coefficients(params, m0, MomentConfig{0.1, 2.0}, 0.5,
                                   1.5, 12.0 * kPi, 0.25),
                  DomainError);  // T_tilde > 1
  CHECK_THROWS_AS(ode_coefficients(params, m0, MomentConfig{0.1, 2.0}, 0.0,
                                   0.5, 12.0 * kPi, 0.25),
                  DomainError);  // eta on the boundary
  CHECK_THROWS_AS(ode_coefficients(params, m0, MomentConfig{2.0, 2.0}, 0.5,
                                   0.5, 12.0 * kPi, 0.25),
                  DomainError);  // s0 > min{1, R^2}
}

TEST_CASE("f_gauge substitutions and limits") {
  const double m0 = 16.0 * kPi;
  // m_tilde = m0, T = 0, beta = 100, lambda = eta = 0.
  CHECK(f_gauge(m0, 0.0, 100.0, 0.0, 0.0, m0, 0.0) ==
        doctest::Approx(20400.0 / 10201.0).epsilon(1e-12));
  // strictly below m0/(8 pi) and increasing toward it
  const double f10 = f_gauge(m0, 0.0, 10.0, 0.0, 0.0, m0, 0.0);
  const double f100 = f_gauge(m0, 0.0, 100.0, 0.0, 0.0, m0, 0.0);
  const double f10000 = f_gauge(m0, 0.0, 10000.0, 0.0, 0.0, m0, 0.0);
  CHECK(f10 < f100);
  CHECK(f100 < f10000);
  CHECK(f10000 < m0 / (8.0 * kPi));
  CHECK(f10000 == doctest::Approx(m0 / (8.0 * kPi)).epsilon(1e-6));
  // eta -> 1 kills the gauge; eta = 1 itself is outside the domain
  CHECK(f_gauge(m0, 0.0, 100.0, 0.0, 1.0 - 1e-12, m0, 0.0) <= 1e-10);
  CHECK_THROWS_AS(f_gauge(m0, 0.0, 100.0, 0.0, 1.0, m0, 0.0), DomainError);
}

TEST_CASE("blowup_roots factorizations") {
  const auto [lo, hi] = blowup_roots(1.0, 1.0, 2.0);
  CHECK(lo == -1.0);
  CHECK(hi == 2.0);
  const auto [zlo, zhi] = blowup_roots(1.0, 0.0, 0.0);
  CHECK(zlo == 0.0);
  CHECK(zhi == 0.0);
  CHECK_THROWS_AS(blowup_roots(0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("blowup_roots satisfy the quadratic residual") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    const double c1 = testsup::loguniform(rng, 1e-2, 1e2);
    const double c2 = testsup::loguniform(rng, 1e-2, 1e2);
    const double c3 = testsup::loguniform(rng, 1e-2, 1e2);
    const auto [lo, hi] = blowup_roots(c1, c2, c3);
    const double scale = std::max({c1 * hi * hi, c2 * std::abs(hi), c3});
    CHECK(std::abs(c1 * hi * hi - c2 * hi - c3) <= 1e-10 * scale);
    CHECK(lo <= hi);
  }
}

TEST_CASE("blowup_threshold closed forms and dominance") {
  CHECK(blowup_threshold(1.0, 0.0, 0.0, 1.0) == 1.0);
  CHECK(blowup_threshold(2.0, 0.0, 0.0, 1.0) == 0.5);
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) {
    const double c1 = testsup::loguniform(rng, 1e-2, 1e2);
    const double c2 = testsup::loguniform(rng, 1e-2, 1e2);
    const double c3 = testsup::loguniform(rng, 1e-2, 1e2);
    const double T = testsup::uniform(rng, 0.05, 1.0);
    const auto [lo, hi] = blowup_roots(c1, c2, c3);
    (void)lo;
    CHECK(blowup_threshold(c1, c2, c3, T) > hi);
  }
}

TEST_CASE("search returns none at and below the critical mass") {
  const auto params = canonical_params();
  for (double m0 : {4.0 * kPi, 8.0 * kPi}) {
    const auto out = select_blowup_parameters(m0, params);
    CHECK(!out.certificate.has_value());
    CHECK(out.diagnostic.find("m0 <= 8*pi") != std::string::npos);
  }
}

TEST_CASE("search certifies 16 pi on the frozen rung") {
  const auto params = canonical_params();
  const auto out = select_blowup_parameters(16.0 * kPi, params);
  REQUIRE(out.certificate.has_value());
  const auto& c = *out.certificate;
  CHECK(c.beta == 2.0);
  CHECK(c.lambda == 0.03125);  // delta = 2^-5
  CHECK(c.eta == 0.03125);
  CHECK(c.epsilon == 0.03125);
  CHECK(c.s0 == 0.001953125);
  CHECK(c.T_tilde == 0.5);
  CHECK(c.m_tilde == doctest::Approx((1.0 - 0.03125) * 16.0 * kPi).epsilon(1e-14));
  check_certificate_inequalities(c);
}

TEST_CASE("search outcomes are frozen across the mass ladder") {
  const auto params = canonical_params();

  SUBCASE("8.5 pi needs a deep rung") {
    const auto out = select_blowup_parameters(8.5 * kPi, params);
    REQUIRE(out.certificate.has_value());
    CHECK(out.certificate->beta == 4.0);
    CHECK(out.certificate->lambda == std::ldexp(1.0, -10));
    CHECK(out.certificate->s0 == 3.0517578125e-05);
    check_certificate_inequalities(*out.certificate);
  }

  SUBCASE("1.25 * 8 pi sits on the rung used by the blow-up experiment") {
    const auto out = select_blowup_parameters(10.0 * kPi, params);
    REQUIRE(out.certificate.has_value());
    const auto& c = *out.certificate;
    CHECK(c.beta == 2.0);
    CHECK(c.lambda == 0.0078125);  // delta = 2^-7
    CHECK(c.s0 == 0.00048828125);
    CHECK(c.f_value == doctest::Approx(1.035383530046935).epsilon(1e-12));
    CHECK(c.threshold == doctest::Approx(1.8487856901346529e-10).epsilon(1e-12));
    check_certificate_inequalities(c);
  }

  SUBCASE("32 pi certifies on a shallow rung") {
    const auto out = select_blowup_parameters(32.0 * kPi, params);
    REQUIRE(out.certificate.has_value());
    CHECK(out.certificate->beta == 2.0);
    CHECK(out.certificate->lambda == 0.0625);  // delta = 2^-4
    CHECK(out.certificate->s0 == 0.0078125);
    check_certificate_inequalities(*out.certificate);
  }

  SUBCASE("barely supercritical mass needs a large beta") {
    const auto out = select_blowup_parameters(8.0 * kPi * 1.01, params);
    REQUIRE(out.certificate.has_value());
    CHECK(out.certificate->beta >= 16.0);
    check_certificate_inequalities(*out.certificate);
  }
}

TEST_CASE("certificate radius records both readings") {
  const auto params = canonical_params();
  const auto out = select_blowup_parameters(10.0 * kPi, params);
  REQUIRE(out.certificate.has_value());
  const auto& c = *out.certificate;
  const double ls = c.lambda * c.s0;
  CHECK(c.r1 == doctest::Approx(ls * ls).epsilon(1e-15));
  CHECK(c.r1_alt == doctest::Approx(std::sqrt(ls)).epsilon(1e-15));
  CHECK(c.r1 <= c.r1_alt);
}

TEST_CASE("coefficients inside a certificate re-evaluate exactly") {
  const auto params = canonical_params();
  const auto out = select_blowup_parameters(16.0 * kPi, params);
  REQUIRE(out.certificate.has_value());
  const auto& c = *out.certificate;
  const auto k = ode_coefficients(params, c.m0, MomentConfig{c.s0, c.beta},
                                  c.eta, c.T_tilde, c.m_tilde, c.lambda);
  CHECK(k.c1 == doctest::Approx(c.coeffs.c1).epsilon(1e-12));
  CHECK(k.c2 == doctest::Approx(c.coeffs.c2).epsilon(1e-12));
  CHECK(k.c31 == doctest::Approx(c.coeffs.c31).epsilon(1e-12));
  CHECK(k.c32 == doctest::Approx(c.coeffs.c32).epsilon(1e-12));
  CHECK(k.phi0 == doctest::Approx(c.coeffs.phi0).epsilon(1e-12));
  CHECK(c.threshold ==
        doctest::Approx(blowup_threshold(k.c1, k.c2, k.c31 + k.c32, c.T_tilde))
            .epsilon(1e-12));
  const double f = f_gauge(c.m_tilde, c.T_tilde, c.beta, c.lambda, c.eta,
                           c.m0, params.kappa1);
  CHECK(f == doctest::Approx(c.f_value).epsilon(1e-12));
}

TEST_CASE("search refuses parameters outside the blow-up hypotheses") {
  const auto bad = ModelParams::make(1.0, 2.0, 2.0, 1.0,
                                     CoefficientFn::affine(0.0, 1.0),
                                     CoefficientFn::power(1.0, 2.0));
  CHECK_THROWS_AS(select_blowup_parameters(16.0 * kPi, bad), DomainError);
}

TEST_CASE("serialization round-trips every field") {
  const auto params = canonical_params();
  const auto out = select_blowup_parameters(16.0 * kPi, params);
  REQUIRE(out.certificate.has_value());
  const auto& c = *out.certificate;
  const auto back = parse_certificate(serialize(c));
  CHECK(back.m0 == c.m0);
  CHECK(back.beta == c.beta);
  CHECK(back.m_tilde == c.m_tilde);
  CHECK(back.T_tilde == c.T_tilde);
  CHECK(back.lambda == c.lambda);
  CHECK(back.eta == c.eta);
  CHECK(back.epsilon == c.epsilon);
  CHECK(back.s0 == c.s0);
  CHECK(back.r1 == c.r1);
  CHECK(back.r1_alt == c.r1_alt);
  CHECK(back.f_value == c.f_value);
  CHECK(back.threshold == c.threshold);
  CHECK(back.coeffs.c1 == c.coeffs.c1);
  CHECK(back.coeffs.c2 == c.coeffs.c2);
  CHECK(back.coeffs.c31 == c.coeffs.c31);
  CHECK(back.coeffs.c32 == c.coeffs.c32);
  CHECK(back.coeffs.phi0 == c.coeffs.phi0);
}

TEST_CASE("parse_certificate rejects malformed records") {
  CHECK_THROWS_AS(parse_certificate("not a record"), ConfigError);
  CHECK_THROWS_AS(parse_certificate("m0 = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_certificate("m0 = 1.0\n"), ConfigError);  // keys missing
}

TEST_CASE("verify_odi accepts the zero series") {
  std::vector<double> t, phi;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.1 * i);
    phi.push_back(0.0);
  }
  OdiCoefficients k{1.0, 1.0, 0.5, 0.5, 0.0};
  const auto rep = verify_odi_along_trajectory(t, phi, k);
  CHECK(rep.pass);
  CHECK(rep.points_checked == t.size() - 2);
  CHECK(rep.total_violations == 0);
}

TEST_CASE("verify_odi accepts the exact pure-quadratic solution") {
  // y' = y^2, y(0) = 1: y(t) = 1 / (1 - t).
  std::vector<double> t, phi;
  for (int i = 0; i <= 100; ++i) {
    const double ti = 0.005 * i;  // stays below the t = 1 singularity
    t.push_back(ti);
    phi.push_back(1.0 / (1.0 - ti));
  }
  OdiCoefficients k{1.0, 0.0, 0.0, 0.0, 0.0};
  const auto rep = verify_odi_along_trajectory(t, phi, k);
  CHECK(rep.pass);
  CHECK(rep.total_violations == 0);
}

TEST_CASE("verify_odi flags a stalled series") {
  std::vector<double> t, phi;
  for (int i = 0; i <= 30; ++i) {
    t.push_back(0.01 * i);
    phi.push_back(10.0);  // rhs = c1 phi^2 = 100 but phi' = 0
  }
  OdiCoefficients k{1.0, 0.0, 0.0, 0.0, 0.0};
  const auto rep = verify_odi_along_trajectory(t, phi, k);
  CHECK(!rep.pass);
  CHECK(rep.total_violations == t.size() - 2);
  CHECK(rep.violations.size() <= 20);
  CHECK_THROWS_AS(
      verify_odi_along_trajectory(std::vector<double>{0.0, 1.0},
                                  std::vector<double>{0.0, 0.0}, k),
      DimensionError);
}

TEST_CASE("integral estimates hold trivially for the zero state") {
  const auto g = RadialGrid::make(128, 1.0);
  const auto params = canonical_params();
  FieldW w(g.n_nodes(), 0.0);
  const auto rep =
      integral_estimates_check(g, w, MomentConfig{0.5, 2.0}, params, kPi, 0.0);
  CHECK(rep.pass);
  CHECK(rep.I1 == 0.0);
  CHECK(rep.I2 == 0.0);
  CHECK(rep.I3 == 0.0);
  CHECK(rep.I4 == 0.0);
  for (const auto& c : rep.checks) CHECK(c.pass);
}

TEST_CASE("integral estimates hold for the homogeneous state without damping") {
  const auto g = RadialGrid::make(512, 1.0);
  auto params = ModelParams::make(1.0, 2.0, 2.0, 1.0,
                                  CoefficientFn::constant(0.0),
                                  CoefficientFn::constant(0.0));
  FieldW w(g.n_nodes());
  for (std::size_t j = 0; j < g.n_nodes(); ++j) w[j] = 0.5 * g.s[j];
  const double m0 = kPi;  // mass of u == 1 on the unit disk
  const auto rep =
      integral_estimates_check(g, w, MomentConfig{0.5, 2.0}, params, m0, 0.3);
  CHECK(rep.pass);
  CHECK(rep.I4 == 0.0);  // mu == 0 kills the nonlocal damping integral
  CHECK(rep.I2_with_s > 0.0);
  for (const auto& c : rep.checks) CHECK(c.pass);
}

TEST_CASE("integral estimates require t < 1") {
  const auto g = RadialGrid::make(64, 1.0);
  const auto params = canonical_params();
  FieldW w(g.n_nodes(), 0.0);
  CHECK_THROWS_AS(
      integral_estimates_check(g, w, MomentConfig{0.5, 2.0}, params, kPi, 1.0),
      DomainError);
}

}  // TEST_SUITE
