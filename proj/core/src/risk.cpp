#include "benign/risk.hpp"

#include <cmath>

#include "benign/error.hpp"

namespace benign {

RiskReport excess_risk(const ScenarioParams& params, std::span<const double> theta_hat,
                       Method method) {
  params.validate();
  require(theta_hat.size() == params.p, "theta_hat must have length p");
  RiskReport report;
  report.method = method;
  for (std::size_t j = 0; j < params.k; ++j) {
    const double d = params.theta_star[j] - theta_hat[j];
    report.head_term += d * d;
  }
  double tail = 0.0;
  for (std::size_t j = params.k; j < params.p; ++j) tail += theta_hat[j] * theta_hat[j];
  report.tail_term = params.eps * tail;
  report.total = report.head_term + report.tail_term;
  return report;
}

double residual_identity_gap(const Matrix& x, std::span<const double> y,
                             std::span<const double> theta, std::size_t k) {
  require(theta.size() == x.cols(), "theta length must equal the number of columns of X");
  require(y.size() == x.rows(), "y length must equal the number of rows of X");
  require(k >= 1 && k <= x.cols(), "head size must satisfy 1 <= k <= p");
  Vector tail_fit(x.rows(), 0.0);
  Vector head_residual(y.begin(), y.end());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < k; ++j) head_residual[i] -= row[j] * theta[j];
    for (std::size_t j = k; j < x.cols(); ++j) tail_fit[i] += row[j] * theta[j];
  }
  return std::abs(norm2(tail_fit) - norm2(head_residual));
}

double ols_theory_curve(double k, double n, double p, double eps) {
  require(n >= 1 && p >= 1, "OLS curve needs n, p >= 1");
  return k / n + eps * p / n + n / p;
}

double sparse_lower_curve(double sigma, double n, double s, double p, double c_free) {
  if (!(s >= 1) || s > p) fail(ErrorCode::DomainError, "sparse lower curve needs 1 <= s <= p");
  const double log_term = std::log(3.0 * p / s);
  return c_free * sigma * sigma * n / (s * log_term * log_term);
}

double empirical_constant(double risk, double sigma, double n, double s, double p) {
  if (!(s >= 1) || s > p) fail(ErrorCode::DomainError, "empirical constant needs 1 <= s <= p");
  if (!(sigma > 0.0)) fail(ErrorCode::DomainError, "empirical constant needs sigma > 0");
  const double log_term = std::log(3.0 * p / s);
  return risk * s * log_term * log_term / (sigma * sigma * n);
}

std::vector<PreconditionCheck> theorem_preconditions(const ScenarioParams& params,
                                                     const BoundInputs& inputs) {
  const auto n = static_cast<double>(params.n);
  const auto p = static_cast<double>(params.p);
  const auto k = static_cast<double>(params.k);
  std::vector<PreconditionCheck> checks;

  const double noise_floor = inputs.c1 * params.theta_star_norm();
  checks.push_back({"sigma_ge_c1_theta_norm", params.sigma, noise_floor,
                    params.sigma >= noise_floor});
  checks.push_back({"p_ge_n_plus_k", p, n + k, p >= n + k});

  const double log_term = inputs.delta > 0.0 ? std::log(1.0 / inputs.delta) : INFINITY;
  const double sample_floor = log_term * log_term + std::pow(k, 1.0 + inputs.c1);
  checks.push_back({"n_ge_log2_inv_delta_plus_k_pow", n, sample_floor, n >= sample_floor});

  const bool in_range = inputs.s >= n && inputs.s <= p - k;
  checks.push_back({"s_in_n_to_p_minus_k", inputs.s, p - k, in_range});
  return checks;
}

}  // namespace benign
