#include "kslab/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kslab/errors.hpp"

namespace kslab {

double CoefficientFn::operator()(double r) const {
  switch (kind) {
    case Kind::Const:
      return p0;
    case Kind::Power:
      return p0 * std::pow(r, p1);
    case Kind::Affine:
      return p0 + p1 * r;
  }
  return 0.0;
}

double CoefficientFn::derivative(double r) const {
  switch (kind) {
    case Kind::Const:
      return 0.0;
    case Kind::Power:
      if (p1 == 0.0) return 0.0;
      return p0 * p1 * std::pow(r, p1 - 1.0);
    case Kind::Affine:
      return p1;
  }
  return 0.0;
}

double CoefficientFn::derivative_fd(double r, double h) const {
  const double rl = std::max(r - h, 0.0);
  const double rr = r + h;
  return ((*this)(rr) - (*this)(rl)) / (rr - rl);
}

std::string CoefficientFn::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Const:
      os << "const(" << p0 << ")";
      break;
    case Kind::Power:
      os << "power(" << p0 << ", " << p1 << ")";
      break;
    case Kind::Affine:
      os << "affine(" << p0 << ", " << p1 << ")";
      break;
  }
  return os.str();
}

CoefficientFn CoefficientFn::constant(double c) { return {Kind::Const, c, 0.0}; }
CoefficientFn CoefficientFn::power(double c, double q) { return {Kind::Power, c, q}; }
CoefficientFn CoefficientFn::affine(double a, double b) { return {Kind::Affine, a, b}; }

ModelParams ModelParams::make(double R, double p, double alpha, double mu1,
                              CoefficientFn kappa, CoefficientFn mu,
                              std::size_t samples) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("ModelParams: R must be positive");
  if (!(p > 1.0)) throw ConfigError("ModelParams: p must exceed 1");
  if (!(alpha >= 0.0)) throw ConfigError("ModelParams: alpha must be nonnegative");
  if (!(mu1 > 0.0)) throw ConfigError("ModelParams: mu1 must be positive");
  if (samples < 2) throw ConfigError("ModelParams: need at least 2 samples");

  ModelParams mp;
  mp.R = R;
  mp.p = p;
  mp.alpha = alpha;
  mp.mu1 = mu1;
  mp.kappa = kappa;
  mp.mu = mu;
  mp.area = std::acos(-1.0) * R * R;

  // sampled sup of kappa; skip r = 0 for negative-exponent powers where the
  // coefficient is allowed to be singular
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= samples; ++i) {
    const double r = R * static_cast<double>(i) / static_cast<double>(samples);
    if (i == 0 && kappa.kind == CoefficientFn::Kind::Power && kappa.p1 < 0.0) continue;
    const double k = kappa(r);
    if (!std::isfinite(k)) throw ConfigError("ModelParams: kappa not finite on (0,R]");
    sup = std::max(sup, k);
  }
  mp.kappa1 = sup;
  return mp;
}

namespace {

void record(HypothesisReport& rep, const char* condition, double r, double lhs, double rhs) {
  ++rep.total_violations;
  if (rep.violations.size() < 20) rep.violations.push_back({condition, r, lhs, rhs});
}

constexpr double kTol = 1e-12;

}  // namespace

std::string HypothesisReport::render() const {
  std::ostringstream os;
  os << (pass ? "pass" : "FAIL") << " (" << samples << " samples";
  os << (analytic_derivatives ? ", analytic derivatives" : ", finite-difference derivatives");
  os << ")";
  if (!violations.empty()) {
    os << "\n";
    for (const auto& v : violations)
      os << "  violated: " << v.condition << " at r = " << v.r << " (lhs " << v.lhs
         << ", rhs " << v.rhs << ")\n";
    if (total_violations > violations.size())
      os << "  ... " << (total_violations - violations.size()) << " more\n";
  }
  return os.str();
}

HypothesisReport check_blowup_hypotheses(const ModelParams& params, std::size_t samples,
                                         bool analytic_derivatives) {
  HypothesisReport rep;
  rep.samples = samples;
  rep.analytic_derivatives = analytic_derivatives;

  if (!(params.p > 1.0)) record(rep, "p > 1", 0.0, params.p, 1.0);
  if (params.alpha + kTol < 2.0 * (params.p - 1.0))
    record(rep, "alpha >= 2(p-1)", 0.0, params.alpha, 2.0 * (params.p - 1.0));

  const double fd_h = 1e-6 * params.R;
  for (std::size_t i = 1; i < samples; ++i) {
    const double r = params.R * static_cast<double>(i) / static_cast<double>(samples);
    const double k = params.kappa(r);
    const double m = params.mu(r);
    const double dk = analytic_derivatives ? params.kappa.derivative(r)
                                           : params.kappa.derivative_fd(r, fd_h);
    const double dm = analytic_derivatives ? params.mu.derivative(r)
                                           : params.mu.derivative_fd(r, fd_h);
    const double cap = params.mu1 * std::pow(r, params.alpha);
    if (k < -kTol) record(rep, "kappa >= 0", r, k, 0.0);
    if (dk > kTol) record(rep, "kappa nonincreasing", r, dk, 0.0);
    if (m < -kTol) record(rep, "mu >= 0", r, m, 0.0);
    if (dm < -kTol) record(rep, "mu nondecreasing", r, dm, 0.0);
    if (m > cap + kTol * std::max(1.0, cap)) record(rep, "mu <= mu1 r^alpha", r, m, cap);
  }
  rep.pass = rep.total_violations == 0;
  return rep;
}

HypothesisReport check_global_hypotheses(const ModelParams& params, std::size_t samples) {
  HypothesisReport rep;
  rep.samples = samples;

  if (!(params.p > 2.0)) record(rep, "p > 2", 0.0, params.p, 2.0);
  if (!(params.alpha < params.p - 2.0 - kTol))
    record(rep, "alpha < p - 2", 0.0, params.alpha, params.p - 2.0);

  for (std::size_t i = 1; i < samples; ++i) {
    const double r = params.R * static_cast<double>(i) / static_cast<double>(samples);
    const double m = params.mu(r);
    const double floor = params.mu1 * std::pow(r, params.alpha);
    if (m < floor - kTol * std::max(1.0, floor)) record(rep, "mu >= mu1 r^alpha", r, m, floor);
  }
  rep.pass = rep.total_violations == 0;
  return rep;
}

}  // namespace kslab
