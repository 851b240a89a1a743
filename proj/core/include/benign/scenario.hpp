#pragma once

#include <cstddef>

#include "benign/numerics.hpp"

namespace benign {

/// Parameters of the Gaussian regression model: rows of X are drawn from
/// N(0, diag(1 x k, eps x (p - k))), y = X theta* + N(0, sigma^2 I), and
/// theta* vanishes outside the first k coordinates.
struct ScenarioParams {
  std::size_t k = 1;
  std::size_t p = 1;
  std::size_t n = 1;
  double eps = 1.0;
  double sigma = 0.0;
  Vector theta_star;

  /// Throws Validation if any invariant is broken (eps = 0 is rejected).
  void validate() const;

  double theta_star_norm() const { return norm2(theta_star); }
  /// Standard deviation of coordinate j (0-based).
  double column_scale(std::size_t j) const;

  /// theta* = (r/sqrt(k), ..., r/sqrt(k), 0, ..., 0) with ||theta*||_2 = r.
  static ScenarioParams with_symmetric_head(std::size_t k, std::size_t p, std::size_t n,
                                            double eps, double sigma, double theta_norm);
};

/// Head coordinates {0..k-1} and tail coordinates {k..p-1}.
struct HeadTailSplit {
  IndexSet head;
  IndexSet tail;

  static HeadTailSplit of(std::size_t k, std::size_t p);
};

struct Dataset {
  ScenarioParams params;
  Matrix x;
  Vector xi;
  Vector y;
};

/// Draws X row by row from one stream, then the noise vector. The result is
/// a pure function of (params, seed).
Dataset generate(const ScenarioParams& params, const SeedSpec& seed);

struct McRiskEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Fresh-sample estimate of mean((theta_hat . x - y)^2) - sigma^2. Only the
/// coordinates where theta_hat or theta* is nonzero are drawn; the others do
/// not enter the prediction error, so the estimate has the same distribution
/// as with full draws.
McRiskEstimate mc_excess_risk(const ScenarioParams& params, std::span<const double> theta_hat,
                              std::size_t m, const SeedSpec& seed);

}  // namespace benign
