#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kslab {

// Radial coefficient from the built-in catalog:
//   const(c)    -> c
//   power(c, q) -> c * r^q
//   affine(a,b) -> a + b * r
// Derivatives are analytic by default; a central-difference fallback is
// available for cross-checks.
struct CoefficientFn {
  enum class Kind { Const, Power, Affine };

  Kind kind = Kind::Const;
  double p0 = 0.0;  // const: c, power: c, affine: a
  double p1 = 0.0;  // power: q, affine: b

  double operator()(double r) const;
  double derivative(double r) const;
  double derivative_fd(double r, double h) const;
  std::string describe() const;

  static CoefficientFn constant(double c);
  static CoefficientFn power(double c, double q);
  static CoefficientFn affine(double a, double b);
};

// Parameters of the reaction system on the disk of radius R:
//   u_t = Laplace u - div(u grad v) + kappa(|x|) u - mu(|x|) u^p
//   0   = Laplace v - m(t)/|Omega| + u
struct ModelParams {
  double R = 1.0;
  double p = 2.0;      // damping exponent, > 1
  double alpha = 2.0;  // growth rate of mu at the origin
  double mu1 = 1.0;    // scale in mu(r) <= mu1 r^alpha (or >= for global regime)
  CoefficientFn kappa = CoefficientFn::constant(0.0);
  CoefficientFn mu = CoefficientFn::power(1.0, 2.0);

  double kappa1 = 0.0;  // sup kappa over [0,R], sampled at construction
  double area = 0.0;    // |Omega| = pi R^2

  static ModelParams make(double R, double p, double alpha, double mu1,
                          CoefficientFn kappa, CoefficientFn mu,
                          std::size_t samples = 4096);
};

struct HypothesisViolation {
  std::string condition;
  double r = 0.0;    // sample location (0 for parameter-level conditions)
  double lhs = 0.0;
  double rhs = 0.0;
};

struct HypothesisReport {
  bool pass = false;
  std::vector<HypothesisViolation> violations;  // capped; see total_violations
  std::size_t total_violations = 0;
  std::size_t samples = 0;
  bool analytic_derivatives = true;
  std::string render() const;
};

// Blow-up regime hypotheses: kappa >= 0 nonincreasing, mu >= 0 nondecreasing,
// mu(r) <= mu1 r^alpha, alpha >= 2(p-1), p > 1. Checked at `samples` points
// of (0, R) plus the parameter-level conditions.
HypothesisReport check_blowup_hypotheses(const ModelParams& params,
                                         std::size_t samples = 4096,
                                         bool analytic_derivatives = true);

// Global-existence regime: p > 2, 0 <= alpha < p - 2, mu(r) >= mu1 r^alpha.
HypothesisReport check_global_hypotheses(const ModelParams& params,
                                         std::size_t samples = 4096);

}  // namespace kslab
