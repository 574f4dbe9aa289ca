#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kslab/fields.hpp"
#include "kslab/grid.hpp"
#include "kslab/model.hpp"

namespace kslab {

// Weighted moment phi(t) = \int_0^{s0} (s0 - s)^beta w(s, t) ds.
struct MomentConfig {
  double s0 = 0.5;   // in (0, min{1, R^2}]
  double beta = 2.0; // >= 1
};

// Constants of the differential inequality phi' >= c1 phi^2 - c2 phi - c3,
// with c3 = c31 + c32, every exponential factor frozen at e^{kappa1 T}:
//   c1  = (1 - eta) beta (beta + 2) / s0^{beta+2}
//   c2  = (m0 e^{kappa1 T} / pi)^{p-1} mu1
//   c31 = m0^2 e^{2 kappa1 T} s0^{beta+2} / (2 eta (beta+1)(beta+2) |Omega|^2)
//   c32 = 2 s0^beta m0 e^{kappa1 T} / pi
//   phi0 = m_tilde ((1 - lambda) s0)^{beta+1} / (2 pi (beta + 1))
struct OdiCoefficients {
  double c1 = 0.0, c2 = 0.0, c31 = 0.0, c32 = 0.0, phi0 = 0.0;
};

// A verified parameter tuple whose inequalities force finite-time blow-up of
// the moment comparison ODE before T_tilde, for initial data of mass m0
// concentrating m_tilde inside radius r1.
struct Certificate {
  double m0 = 0.0;
  double beta = 0.0;
  double m_tilde = 0.0;
  double T_tilde = 0.0;
  double lambda = 0.0;
  double eta = 0.0;
  double epsilon = 0.0;
  double s0 = 0.0;
  double r1 = 0.0;       // (lambda s0)^2, as stated; the conservative radius
  double r1_alt = 0.0;   // sqrt(lambda s0), the transform-consistent reading
  double f_value = 0.0;  // gauge at the selected parameters
  double threshold = 0.0;  // ODE escape threshold the data must beat
  OdiCoefficients coeffs;
};

// Trapezoid quadrature of (s0 - s)^beta w over [0, s0] on the s-grid, with
// the partial last cell closed at s0 where the weight vanishes.
double moment_phi(const RadialGrid& grid, const FieldW& w, const MomentConfig& cfg);

// phi(0) >= m_tilde ((1-lambda) s0)^{beta+1} / (2 pi (beta+1)) for data
// concentrating m_tilde inside the ball matching s <= lambda s0.
double phi0_lower_bound(double m_tilde, double lambda, double beta, double s0);

// Scale-free gauge deciding certifiability; s0 cancels out of the comparison
// ((1-eps) phi0)^2 >= c32/c1 exactly when (1-eps)^2 f >= 1:
//   f = (1-eta) beta (beta+2) m_tilde^2 (1-lambda)^{2 beta+2} pi
//       / (4 pi^2 (beta+1)^2 * 2 m0 e^{kappa1 T_tilde})
// As beta -> inf with lambda = eta = T_tilde = 0 and m_tilde = m0 this tends
// to m0 / (8 pi): the critical-mass dichotomy.
double f_gauge(double m_tilde, double T_tilde, double beta, double lambda,
               double eta, double m0, double kappa1);

// Evaluates the five ODI constants. Requires 0 < T_tilde <= 1,
// 0 < s0 <= min{1, R^2}, eta in (0,1), lambda in [0,1), 0 < m_tilde <= m0.
OdiCoefficients ode_coefficients(const ModelParams& params, double m0,
                                 const MomentConfig& cfg, double eta,
                                 double T_tilde, double m_tilde, double lambda);

// Roots of c1 y^2 - c2 y - c3 = 0 (lower, upper). c1 > 0, c2, c3 >= 0.
std::pair<double, double> blowup_roots(double c1, double c2, double c3);

// y(0) >= this forces y' >= c1 y^2 - c2 y - c3 to escape to +inf by T_tilde:
//   (c2 + sqrt(c1 c3)) / c1 + 1 / (c1 T_tilde)
double blowup_threshold(double c1, double c2, double c3, double T_tilde);

struct SearchConfig {
  double T_tilde = 0.5;
  double beta_max = 65536.0;     // beta ladder 2, 4, ..., beta_max
  int delta_max_pow2 = 16;       // delta ladder 2^-1 .. 2^-delta_max_pow2
  int s0_max_halvings = 200;     // s0 ladder min{1,R^2}/2, /4, ...
};

struct CertificateSearch {
  std::optional<Certificate> certificate;
  std::string diagnostic;  // why none, or which rung succeeded
};

// Deterministic search: delta from large to small (largest workable epsilon
// wins), beta ladder inside, then s0 halved until the three smallness
// conditions and the gauge comparison all hold. Every returned certificate is
// re-verified by direct evaluation. Returns none for m0 <= 8 pi.
// Requires check_blowup_hypotheses(params) to pass.
CertificateSearch select_blowup_parameters(double m0, const ModelParams& params,
                                           const SearchConfig& cfg = {});

// Key = value lines, full double precision; parse inverts exactly.
std::string serialize(const Certificate& cert);
Certificate parse_certificate(std::string_view text);

struct OdiViolation {
  double t = 0.0, dphi = 0.0, rhs = 0.0, slack = 0.0;
};

struct OdiVerifyResult {
  bool pass = false;
  std::size_t points_checked = 0;
  std::vector<OdiViolation> violations;  // capped at 20
  std::size_t total_violations = 0;
};

// Centered-difference phi' against c1 phi^2 - c2 phi - (c31 + c32) at the
// interior sample times, with slack 5% of (c31 + c32 + c1 phi^2).
OdiVerifyResult verify_odi_along_trajectory(std::span<const double> t,
                                            std::span<const double> phi,
                                            const OdiCoefficients& k);

struct EstimateCheck {
  std::string name;
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
  bool pass = false;
};

struct EstimateReport {
  bool pass = false;
  double I1 = 0.0;        // 4 \int (s0-s)^beta s w_ss
  double I2 = 0.0;        // 2 \int (s0-s)^beta w w_s
  double I2_with_s = 0.0; // 2 \int (s0-s)^beta s w w_s (alternate reading)
  double I3 = 0.0;        // -(m/|Omega|) \int (s0-s)^beta s w_s
  double I4 = 0.0;        // -2^{p-1} \int (s0-s)^beta \int_0^s mu w_s^p
  double phi = 0.0;
  std::vector<EstimateCheck> checks;
};

// Checks the three interior estimates behind the ODI on a snapshot at time
// t < 1, each with 5% slack:
//   I1      >= -(2/pi) s0^beta m0 e^{kappa1 t}
//   I2 + I3 >= (1-eta) beta (beta+2) phi^2 / s0^{beta+2}
//              - m0^2 e^{2 kappa1 t} s0^{beta+2} / (2 eta (beta+1)(beta+2) |Omega|^2)
//              with the canonical split eta = 1/2
//   |I4|    <= (m0 e^{kappa1 t} / pi)^{p-1} mu1 phi
EstimateReport integral_estimates_check(const RadialGrid& grid, const FieldW& w,
                                        const MomentConfig& cfg,
                                        const ModelParams& params, double m0,
                                        double t);

}  // namespace kslab
