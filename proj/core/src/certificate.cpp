#include "kslab/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <sstream>

#include "kslab/errors.hpp"
#include "kslab/numerics.hpp"
#include "kslab/transform.hpp"

namespace kslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Trapezoid of (s0 - s)^beta * f(j) over [0, s0] on the s-grid. The weight
// vanishes at s = s0, so the dangling partial cell closes with value 0.
template <class F>
double weighted_integral(const RadialGrid& grid, double s0, double beta, F&& f) {
  const auto& s = grid.s;
  double acc = 0.0;
  double g_prev = std::pow(s0, beta) * f(std::size_t{0});
  std::size_t j = 1;
  for (; j < s.size() && s[j] <= s0; ++j) {
    const double g = std::pow(s0 - s[j], beta) * f(j);
    acc += 0.5 * (s[j] - s[j - 1]) * (g + g_prev);
    g_prev = g;
  }
  if (j < s.size() && s[j - 1] < s0) acc += 0.5 * (s0 - s[j - 1]) * g_prev;
  return acc;
}

bool finite_positive(const OdiCoefficients& c) {
  return std::isfinite(c.c1) && c.c1 > 0.0 && std::isfinite(c.c2) && c.c2 > 0.0 &&
         std::isfinite(c.c31) && c.c31 > 0.0 && std::isfinite(c.c32) &&
         c.c32 > 0.0 && std::isfinite(c.phi0) && c.phi0 > 0.0;
}

// The five inequalities a certificate asserts, evaluated directly from the
// coefficient values. rel_slack = 0 for the search, 1e-12 for re-audits.
bool certificate_inequalities_hold(const OdiCoefficients& c, double eps,
                                   double T_tilde, double f_value,
                                   double rel_slack) {
  const auto ge = [rel_slack](double lhs, double rhs) {
    return lhs >= rhs - rel_slack * (std::abs(lhs) + std::abs(rhs));
  };
  const double third = eps / 3.0 * c.phi0;
  if (!ge((1.0 - eps) * (1.0 - eps) * f_value, 1.0)) return false;
  if (!ge(third, c.c2 / c.c1)) return false;
  if (!ge(third * third, c.c31 / c.c1)) return false;
  if (!ge(third, 2.0 / (c.c1 * T_tilde))) return false;
  const double guard = (1.0 - eps) * c.phi0;
  if (!ge(guard * guard, c.c32 / c.c1)) return false;
  return ge(c.phi0, blowup_threshold(c.c1, c.c2, c.c31 + c.c32, T_tilde));
}

void put(std::ostringstream& os, const char* key, double value) {
  os << key << " = " << format_double(value) << "\n";
}

}  // namespace

double moment_phi(const RadialGrid& grid, const FieldW& w,
                  const MomentConfig& cfg) {
  if (w.size() != grid.n_nodes())
    throw DimensionError("moment_phi: w has " + std::to_string(w.size()) +
                         " nodes, grid has " + std::to_string(grid.n_nodes()));
  if (!(cfg.s0 > 0.0) || cfg.s0 > grid.s.back() * (1.0 + 1e-12))
    throw DomainError("moment_phi: s0 must lie in (0, R^2]");
  if (!(cfg.beta > 0.0)) throw DomainError("moment_phi: beta must be positive");
  return weighted_integral(grid, cfg.s0, cfg.beta,
                           [&](std::size_t j) { return w[j]; });
}

double phi0_lower_bound(double m_tilde, double lambda, double beta, double s0) {
  if (!(m_tilde > 0.0)) throw DomainError("phi0_lower_bound: m_tilde must be positive");
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw DomainError("phi0_lower_bound: lambda must lie in [0, 1)");
  if (!(beta > -1.0)) throw DomainError("phi0_lower_bound: beta must exceed -1");
  if (!(s0 > 0.0)) throw DomainError("phi0_lower_bound: s0 must be positive");
  return m_tilde * std::pow((1.0 - lambda) * s0, beta + 1.0) /
         (2.0 * kPi * (beta + 1.0));
}

double f_gauge(double m_tilde, double T_tilde, double beta, double lambda,
               double eta, double m0, double kappa1) {
  if (!(beta > 0.0)) throw DomainError("f_gauge: beta must be positive");
  if (!(m0 > 0.0) || !(m_tilde > 0.0) || m_tilde > m0 * (1.0 + 1e-12))
    throw DomainError("f_gauge: need 0 < m_tilde <= m0");
  if (!(lambda >= 0.0 && lambda < 1.0) || !(eta >= 0.0 && eta < 1.0))
    throw DomainError("f_gauge: lambda, eta must lie in [0, 1)");
  if (!(T_tilde >= 0.0)) throw DomainError("f_gauge: T_tilde must be nonnegative");
  const double bp1 = beta + 1.0;
  return (1.0 - eta) * beta * (beta + 2.0) * m_tilde * m_tilde /
         (4.0 * kPi * kPi * bp1 * bp1) *
         std::pow(1.0 - lambda, 2.0 * beta + 2.0) * kPi /
         (2.0 * m0 * std::exp(kappa1 * T_tilde));
}

OdiCoefficients ode_coefficients(const ModelParams& params, double m0,
                                 const MomentConfig& cfg, double eta,
                                 double T_tilde, double m_tilde, double lambda) {
  if (!(m0 > 0.0)) throw DomainError("ode_coefficients: m0 must be positive");
  if (!(m_tilde > 0.0) || m_tilde > m0 * (1.0 + 1e-12))
    throw DomainError("ode_coefficients: need 0 < m_tilde <= m0");
  if (!(T_tilde > 0.0) || T_tilde > 1.0)
    throw DomainError("ode_coefficients: T_tilde must lie in (0, 1]");
  if (!(eta > 0.0 && eta < 1.0))
    throw DomainError("ode_coefficients: eta must lie in (0, 1)");
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw DomainError("ode_coefficients: lambda must lie in [0, 1)");
  if (!(cfg.beta > 1.0)) throw DomainError("ode_coefficients: beta must exceed 1");
  const double smax = std::min(1.0, params.R * params.R);
  if (!(cfg.s0 > 0.0) || cfg.s0 > smax)
    throw DomainError("ode_coefficients: s0 must lie in (0, min{1, R^2}]");

  const double beta = cfg.beta, s0 = cfg.s0;
  const double E = std::exp(params.kappa1 * T_tilde);
  OdiCoefficients c;
  c.c1 = (1.0 - eta) * beta * (beta + 2.0) / std::pow(s0, beta + 2.0);
  c.c2 = std::pow(m0 * E / kPi, params.p - 1.0) * params.mu1;
  c.c31 = m0 * m0 * E * E * std::pow(s0, beta + 2.0) /
          (2.0 * eta * (beta + 1.0) * (beta + 2.0) * params.area * params.area);
  c.c32 = 2.0 * std::pow(s0, beta) * m0 * E / kPi;
  c.phi0 = phi0_lower_bound(m_tilde, lambda, beta, s0);
  return c;
}

std::pair<double, double> blowup_roots(double c1, double c2, double c3) {
  if (!(c1 > 0.0)) throw DomainError("blowup_roots: c1 must be positive");
  if (c2 < 0.0 || c3 < 0.0)
    throw DomainError("blowup_roots: c2, c3 must be nonnegative");
  const double disc = std::sqrt(c2 * c2 + 4.0 * c1 * c3);
  return {(c2 - disc) / (2.0 * c1), (c2 + disc) / (2.0 * c1)};
}

double blowup_threshold(double c1, double c2, double c3, double T_tilde) {
  if (!(c1 > 0.0) || !(T_tilde > 0.0))
    throw DomainError("blowup_threshold: c1 and T_tilde must be positive");
  if (c2 < 0.0 || c3 < 0.0)
    throw DomainError("blowup_threshold: c2, c3 must be nonnegative");
  return (c2 + std::sqrt(c1 * c3)) / c1 + 1.0 / (c1 * T_tilde);
}

CertificateSearch select_blowup_parameters(double m0, const ModelParams& params,
                                           const SearchConfig& cfg) {
  if (!(m0 > 0.0))
    throw DomainError("select_blowup_parameters: m0 must be positive");
  if (!(cfg.T_tilde > 0.0) || cfg.T_tilde > 1.0)
    throw DomainError("select_blowup_parameters: T_tilde must lie in (0, 1]");
  const HypothesisReport hyp = check_blowup_hypotheses(params);
  if (!hyp.pass)
    throw DomainError("select_blowup_parameters: coefficient hypotheses fail: " +
                      hyp.render());

  CertificateSearch out;
  if (m0 <= 8.0 * kPi) {
    out.diagnostic =
        "no certificate: m0 <= 8*pi, and sup f = m0/(8*pi) <= 1 over all "
        "admissible parameters, so (1-eps)^2 f >= 1 is unsatisfiable";
    return out;
  }

  const double smax = std::min(1.0, params.R * params.R);
  for (double beta = 2.0; beta <= cfg.beta_max * (1.0 + 1e-9); beta *= 2.0) {
    for (int k = 1; k <= cfg.delta_max_pow2; ++k) {
      const double delta = std::ldexp(1.0, -k);
      const double m_tilde = (1.0 - delta) * m0;
      const double lambda = delta, eta = delta, eps = delta;
      const double f =
          f_gauge(m_tilde, cfg.T_tilde, beta, lambda, eta, m0, params.kappa1);
      if (!((1.0 - eps) * (1.0 - eps) * f >= 1.0)) continue;

      double s0 = 0.5 * smax;
      for (int h = 0; h <= cfg.s0_max_halvings; ++h, s0 *= 0.5) {
        const MomentConfig mc{s0, beta};
        const OdiCoefficients c = ode_coefficients(params, m0, mc, eta,
                                                   cfg.T_tilde, m_tilde, lambda);
        if (!finite_positive(c)) break;
        if (!certificate_inequalities_hold(c, eps, cfg.T_tilde, f, 0.0)) continue;

        Certificate cert;
        cert.m0 = m0;
        cert.beta = beta;
        cert.m_tilde = m_tilde;
        cert.T_tilde = cfg.T_tilde;
        cert.lambda = lambda;
        cert.eta = eta;
        cert.epsilon = eps;
        cert.s0 = s0;
        cert.r1 = std::min(std::pow(lambda * s0, 2.0), 0.5 * params.R);
        cert.r1_alt = std::sqrt(lambda * s0);
        cert.f_value = f;
        cert.coeffs = c;
        cert.threshold =
            blowup_threshold(c.c1, c.c2, c.c31 + c.c32, cfg.T_tilde);
        std::ostringstream diag;
        diag << "certificate at beta = " << beta << ", delta = 2^-" << k
             << ", s0 = " << format_double(s0) << " (" << h
             << " extra halvings), gauge = " << format_double(f);
        out.certificate = cert;
        out.diagnostic = diag.str();
        return out;
      }
    }
  }
  std::ostringstream diag;
  diag << "search exhausted at beta <= " << cfg.beta_max << ", delta >= 2^-"
       << cfg.delta_max_pow2 << ", " << cfg.s0_max_halvings
       << " s0 halvings; mass headroom m0/(8*pi) = "
       << format_double(m0 / (8.0 * kPi))
       << " too thin for the configured ladders";
  out.diagnostic = diag.str();
  return out;
}

std::string serialize(const Certificate& cert) {
  std::ostringstream os;
  put(os, "m0", cert.m0);
  put(os, "beta", cert.beta);
  put(os, "m_tilde", cert.m_tilde);
  put(os, "T_tilde", cert.T_tilde);
  put(os, "lambda", cert.lambda);
  put(os, "eta", cert.eta);
  put(os, "epsilon", cert.epsilon);
  put(os, "s0", cert.s0);
  put(os, "r1", cert.r1);
  put(os, "r1_alt", cert.r1_alt);
  put(os, "f_value", cert.f_value);
  put(os, "threshold", cert.threshold);
  put(os, "c1", cert.coeffs.c1);
  put(os, "c2", cert.coeffs.c2);
  put(os, "c31", cert.coeffs.c31);
  put(os, "c32", cert.coeffs.c32);
  put(os, "phi0", cert.coeffs.phi0);
  return os.str();
}

Certificate parse_certificate(std::string_view text) {
  std::map<std::string, double> kv;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("parse_certificate: expected 'key = value', got: " + line);
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::size_t pos = 0;
    const std::string val = line.substr(eq + 1);
    double parsed = 0.0;
    try {
      parsed = std::stod(val, &pos);
    } catch (const std::exception&) {
      throw ConfigError("parse_certificate: bad value in line: " + line);
    }
    kv[key] = parsed;
  }
  const auto need = [&kv](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw ConfigError(std::string("parse_certificate: missing key ") + key);
    return it->second;
  };
  Certificate cert;
  cert.m0 = need("m0");
  cert.beta = need("beta");
  cert.m_tilde = need("m_tilde");
  cert.T_tilde = need("T_tilde");
  cert.lambda = need("lambda");
  cert.eta = need("eta");
  cert.epsilon = need("epsilon");
  cert.s0 = need("s0");
  cert.r1 = need("r1");
  cert.r1_alt = need("r1_alt");
  cert.f_value = need("f_value");
  cert.threshold = need("threshold");
  cert.coeffs.c1 = need("c1");
  cert.coeffs.c2 = need("c2");
  cert.coeffs.c31 = need("c31");
  cert.coeffs.c32 = need("c32");
  cert.coeffs.phi0 = need("phi0");
  return cert;
}

OdiVerifyResult verify_odi_along_trajectory(std::span<const double> t,
                                            std::span<const double> phi,
                                            const OdiCoefficients& k) {
  if (t.size() != phi.size())
    throw DimensionError("verify_odi_along_trajectory: t and phi sizes differ");
  if (t.size() < 3)
    throw DimensionError("verify_odi_along_trajectory: need at least 3 samples");
  OdiVerifyResult res;
  const double c3 = k.c31 + k.c32;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double span_t = t[i + 1] - t[i - 1];
    if (!(span_t > 0.0))
      throw DomainError("verify_odi_along_trajectory: times must increase");
    const double dphi = (phi[i + 1] - phi[i - 1]) / span_t;
    const double quad = k.c1 * phi[i] * phi[i];
    const double rhs = quad - k.c2 * phi[i] - c3;
    const double slack = 0.05 * (c3 + quad);
    ++res.points_checked;
    if (dphi < rhs - slack) {
      ++res.total_violations;
      if (res.violations.size() < 20)
        res.violations.push_back({t[i], dphi, rhs, slack});
    }
  }
  res.pass = res.total_violations == 0;
  return res;
}

EstimateReport integral_estimates_check(const RadialGrid& grid, const FieldW& w,
                                        const MomentConfig& cfg,
                                        const ModelParams& params, double m0,
                                        double t) {
  if (w.size() != grid.n_nodes())
    throw DimensionError("integral_estimates_check: w/grid size mismatch");
  if (!(t >= 0.0) || t >= 1.0)
    throw DomainError("integral_estimates_check: bounds only valid for t < 1");
  if (!(m0 > 0.0)) throw DomainError("integral_estimates_check: m0 must be positive");

  const double beta = cfg.beta, s0 = cfg.s0;
  const std::vector<double> ws = derivative1(grid.s, w.values);
  const std::vector<double> wss = derivative2(grid.s, w.values);
  // Inner nonlocal integrand; w_s clamped at 0 before the p-power since the
  // discrete derivative can dip slightly negative at machine scale.
  std::vector<double> inner(grid.n_nodes());
  for (std::size_t j = 0; j < inner.size(); ++j)
    inner[j] = params.mu(grid.r[j]) * std::pow(std::max(ws[j], 0.0), params.p);
  cumulative_trapezoid(grid.s, inner, inner);

  EstimateReport rep;
  rep.I1 = 4.0 * weighted_integral(grid, s0, beta,
                                   [&](std::size_t j) { return grid.s[j] * wss[j]; });
  rep.I2 = 2.0 * weighted_integral(grid, s0, beta,
                                   [&](std::size_t j) { return w[j] * ws[j]; });
  rep.I2_with_s =
      2.0 * weighted_integral(grid, s0, beta, [&](std::size_t j) {
        return grid.s[j] * w[j] * ws[j];
      });
  const double m = total_mass(w);
  rep.I3 = -(m / params.area) *
           weighted_integral(grid, s0, beta,
                             [&](std::size_t j) { return grid.s[j] * ws[j]; });
  rep.I4 = -std::pow(2.0, params.p - 1.0) *
           weighted_integral(grid, s0, beta,
                             [&](std::size_t j) { return inner[j]; });
  rep.phi = moment_phi(grid, w, cfg);

  const double growth = m0 * std::exp(params.kappa1 * t);
  const auto slack_of = [](double lhs, double rhs) {
    return 0.05 * (std::abs(lhs) + std::abs(rhs));
  };

  EstimateCheck i1;
  i1.name = "I1_lower_bound";
  i1.lhs = rep.I1;
  i1.rhs = -(2.0 / kPi) * std::pow(s0, beta) * growth;
  i1.slack = slack_of(i1.lhs, i1.rhs);
  i1.pass = i1.lhs >= i1.rhs - i1.slack;

  const double eta = 0.5;  // canonical split for the diagnostic
  EstimateCheck i23;
  i23.name = "I2_I3_lower_bound";
  i23.lhs = rep.I2 + rep.I3;
  i23.rhs = (1.0 - eta) * beta * (beta + 2.0) / std::pow(s0, beta + 2.0) *
                rep.phi * rep.phi -
            growth * growth * std::pow(s0, beta + 2.0) /
                (2.0 * eta * (beta + 1.0) * (beta + 2.0) * params.area * params.area);
  i23.slack = slack_of(i23.lhs, i23.rhs);
  i23.pass = i23.lhs >= i23.rhs - i23.slack;

  EstimateCheck i4;
  i4.name = "I4_upper_bound";
  i4.lhs = std::abs(rep.I4);
  i4.rhs = std::pow(growth / kPi, params.p - 1.0) * params.mu1 * rep.phi;
  i4.slack = slack_of(i4.lhs, i4.rhs);
  i4.pass = i4.lhs <= i4.rhs + i4.slack;

  rep.checks = {i1, i23, i4};
  rep.pass = i1.pass && i23.pass && i4.pass;
  return rep;
}

}  // namespace kslab
