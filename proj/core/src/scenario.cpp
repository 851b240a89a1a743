#include "benign/scenario.hpp"

#include <cmath>
#include <numeric>

#include "benign/error.hpp"

namespace benign {

void ScenarioParams::validate() const {
  require(k >= 1 && k <= p, "scenario requires 1 <= k <= p");
  require(n >= 1, "scenario requires n >= 1");
  require(std::isfinite(eps) && eps > 0.0, "scenario requires eps > 0");
  require(std::isfinite(sigma) && sigma >= 0.0, "scenario requires sigma >= 0");
  require(theta_star.size() == p, "theta_star must have length p");
  for (double v : theta_star) require(std::isfinite(v), "theta_star entries must be finite");
  for (std::size_t j = k; j < p; ++j)
    require(theta_star[j] == 0.0, "theta_star must vanish on the tail coordinates");
}

double ScenarioParams::column_scale(std::size_t j) const {
  return j < k ? 1.0 : std::sqrt(eps);
}

ScenarioParams ScenarioParams::with_symmetric_head(std::size_t k, std::size_t p, std::size_t n,
                                                   double eps, double sigma,
                                                   double theta_norm) {
  ScenarioParams params;
  params.k = k;
  params.p = p;
  params.n = n;
  params.eps = eps;
  params.sigma = sigma;
  params.theta_star.assign(p, 0.0);
  require(k >= 1 && k <= p, "scenario requires 1 <= k <= p");
  const double entry = theta_norm / std::sqrt(static_cast<double>(k));
  for (std::size_t j = 0; j < k; ++j) params.theta_star[j] = entry;
  params.validate();
  return params;
}

HeadTailSplit HeadTailSplit::of(std::size_t k, std::size_t p) {
  require(k <= p, "head size cannot exceed the dimension");
  HeadTailSplit split;
  split.head.resize(k);
  split.tail.resize(p - k);
  std::iota(split.head.begin(), split.head.end(), std::size_t{0});
  std::iota(split.tail.begin(), split.tail.end(), k);
  return split;
}

Dataset generate(const ScenarioParams& params, const SeedSpec& seed) {
  params.validate();
  RandomStream stream = derive_stream(seed);
  const std::size_t n = params.n;
  const std::size_t p = params.p;
  const double tail_scale = std::sqrt(params.eps);

  std::vector<double> entries(n * p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j)
      entries[i * p + j] = stream.normal() * (j < params.k ? 1.0 : tail_scale);

  Dataset data{params, Matrix(n, p, std::move(entries)), Vector(n), Vector(n)};
  for (double& e : data.xi) e = params.sigma * stream.normal();
  for (std::size_t i = 0; i < n; ++i) {
    // theta* lives on the head, so the tail never contributes to the signal.
    double signal = 0.0;
    auto row = data.x.row(i);
    for (std::size_t j = 0; j < params.k; ++j) signal += row[j] * params.theta_star[j];
    data.y[i] = signal + data.xi[i];
  }
  return data;
}

McRiskEstimate mc_excess_risk(const ScenarioParams& params, std::span<const double> theta_hat,
                              std::size_t m, const SeedSpec& seed) {
  params.validate();
  require(theta_hat.size() == params.p, "theta_hat must have length p");
  require(m >= 1, "mc_excess_risk needs at least one sample");

  IndexSet active;
  for (std::size_t j = 0; j < params.p; ++j)
    if (theta_hat[j] != 0.0 || params.theta_star[j] != 0.0) active.push_back(j);
  Vector scale(active.size());
  for (std::size_t a = 0; a < active.size(); ++a) scale[a] = params.column_scale(active[a]);

  RandomStream stream = derive_stream(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    double prediction = 0.0;
    double response = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double xj = scale[a] * stream.normal();
      prediction += theta_hat[active[a]] * xj;
      response += params.theta_star[active[a]] * xj;
    }
    response += params.sigma * stream.normal();
    const double loss = (prediction - response) * (prediction - response);
    const double delta = loss - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (loss - mean);
  }
  McRiskEstimate estimate;
  estimate.samples = m;
  estimate.value = mean - params.sigma * params.sigma;
  const double variance = m > 1 ? m2 / static_cast<double>(m - 1) : 0.0;
  estimate.std_error = std::sqrt(variance / static_cast<double>(m));
  return estimate;
}

}  // namespace benign
