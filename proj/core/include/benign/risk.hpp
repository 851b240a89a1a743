#pragma once

#include <string>
#include <vector>

#include "benign/interpolators.hpp"
#include "benign/scenario.hpp"

namespace benign {

/// Exact excess risk split along the head/tail coordinates.
struct RiskReport {
  double head_term = 0.0;  // ||theta*_H - theta_H||^2
  double tail_term = 0.0;  // eps ||theta_T||^2
  double total = 0.0;
  Method method = Method::External;
};

RiskReport excess_risk(const ScenarioParams& params, std::span<const double> theta_hat,
                       Method method = Method::External);

/// | ||X_T theta_T|| - ||y - X_H theta_H|| |, which vanishes for interpolants.
double residual_identity_gap(const Matrix& x, std::span<const double> y,
                             std::span<const double> theta, std::size_t k);

/// k/n + eps p/n + n/p. A shape curve with unit constant.
double ols_theory_curve(double k, double n, double p, double eps);

/// c_free sigma^2 n / (s ln^2(3p/s)), natural logarithm.
double sparse_lower_curve(double sigma, double n, double s, double p, double c_free = 1.0);

/// Inverse of sparse_lower_curve in c_free: R s ln^2(3p/s) / (sigma^2 n).
double empirical_constant(double risk, double sigma, double n, double s, double p);

struct BoundInputs {
  double s = 0.0;
  double delta = 0.05;
  double c1 = 1.0;
  double c_free = 1.0;
};

struct PreconditionCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
};

/// Evaluates sigma >= c1 ||theta*||, p >= n + k, n >= ln^2(1/delta) + k^(1+c1)
/// and n <= s <= p - k, in that order.
std::vector<PreconditionCheck> theorem_preconditions(const ScenarioParams& params,
                                                     const BoundInputs& inputs);

}  // namespace benign
