#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "benign/error.hpp"
#include "benign/risk.hpp"
#include "benign/scenario.hpp"

using namespace benign;

namespace {

bool throws_validation(const ScenarioParams& params) {
  try {
    params.validate();
  } catch (const Error& e) {
    return e.code() == ErrorCode::Validation;
  }
  return false;
}

}  // namespace

TEST_CASE("validation rejects broken parameters") {
  auto good = ScenarioParams::with_symmetric_head(2, 10, 5, 0.1, 1.0, 1.0);
  CHECK_NOTHROW(good.validate());

  auto zero_eps = good;
  zero_eps.eps = 0.0;
  CHECK(throws_validation(zero_eps));

  auto tail_signal = good;
  tail_signal.theta_star[7] = 0.5;
  CHECK(throws_validation(tail_signal));

  auto big_k = good;
  big_k.k = 11;
  CHECK(throws_validation(big_k));

  auto short_theta = good;
  short_theta.theta_star.pop_back();
  CHECK(throws_validation(short_theta));

  auto negative_sigma = good;
  negative_sigma.sigma = -1.0;
  CHECK(throws_validation(negative_sigma));
}

TEST_CASE("symmetric head has the requested norm") {
  const auto params = ScenarioParams::with_symmetric_head(5, 30, 10, 0.01, 1.0, 2.0);
  CHECK(params.theta_star_norm() == doctest::Approx(2.0));
  for (std::size_t j = 5; j < 30; ++j) CHECK(params.theta_star[j] == 0.0);
  CHECK(params.column_scale(0) == 1.0);
  CHECK(params.column_scale(29) == doctest::Approx(0.1));
}

TEST_CASE("zero signal and zero noise give y = 0 exactly") {
  const auto params = ScenarioParams::with_symmetric_head(3, 20, 8, 0.5, 0.0, 0.0);
  const Dataset data = generate(params, {9, "trial", 0});
  for (double v : data.y) CHECK(v == 0.0);
}

TEST_CASE("generated data satisfy y = X theta* + xi") {
  auto stream = derive_stream({5, "scenario-test", 0});
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + stream.below(5);
    const std::size_t p = k + stream.below(40);
    const std::size_t n = 1 + stream.below(20);
    const auto params = ScenarioParams::with_symmetric_head(
        k, p, n, 0.01 + stream.uniform(), stream.uniform() * 2.0, stream.uniform() * 3.0);
    const Dataset data = generate(params, {7, "trial", static_cast<std::uint64_t>(trial)});
    const Vector signal = multiply(data.x, params.theta_star);
    const double scale = std::max(1.0, norm_inf(data.y));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(signal[i] + data.xi[i] - data.y[i]) <= 1e-12 * scale);
    CHECK(data.x.rows() == n);
    CHECK(data.x.cols() == p);
  }
}

TEST_CASE("generation is a pure function of the seed") {
  const auto params = ScenarioParams::with_symmetric_head(2, 12, 6, 0.3, 1.0, 1.0);
  const Dataset a = generate(params, {11, "trial", 3});
  const Dataset b = generate(params, {11, "trial", 3});
  const Dataset c = generate(params, {11, "trial", 4});
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK_FALSE(a.x == c.x);
}

TEST_CASE("isotropic case has unit column variance") {
  const auto params = ScenarioParams::with_symmetric_head(4, 4, 1, 1.0, 0.0, 0.0);
  for (std::size_t j = 0; j < 4; ++j) CHECK(params.column_scale(j) == 1.0);
}

TEST_CASE("column variances match the covariance within a 3-sigma band") {
  const std::size_t trials = 10'000;
  const auto params = ScenarioParams::with_symmetric_head(2, 100, 1, 0.01, 0.0, 0.0);
  Vector sum_sq(100, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const Dataset data = generate(params, {13, "variance", t});
    for (std::size_t j = 0; j < 100; ++j) sum_sq[j] += data.x(0, j) * data.x(0, j);
  }
  for (std::size_t j = 0; j < 100; ++j) {
    const double var = j < 2 ? 1.0 : 0.01;
    // Mean-zero entries: sum of squares / trials has sd var * sqrt(2 / trials).
    const double band = 3.0 * var * std::sqrt(2.0 / trials);
    CHECK(std::abs(sum_sq[j] / trials - var) <= band);
  }
}

TEST_CASE("response variance is sigma^2 + ||theta*||^2") {
  const std::size_t trials = 10'000;
  const auto params = ScenarioParams::with_symmetric_head(3, 10, 2, 0.2, 1.5, 2.0);
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Dataset data = generate(params, {17, "response", t});
    sum_sq += data.y[0] * data.y[0];
  }
  const double var = 1.5 * 1.5 + 4.0;
  CHECK(std::abs(sum_sq / trials - var) <= 3.0 * var * std::sqrt(2.0 / trials));
}

TEST_CASE("Monte Carlo excess risk") {
  const auto params = ScenarioParams::with_symmetric_head(2, 6, 4, 0.25, 1.0, 1.0);
  const std::size_t m = 200'000;

  SUBCASE("the true parameter has zero excess risk") {
    const auto est = mc_excess_risk(params, params.theta_star, m, {1, "mc", 0});
    CHECK(std::abs(est.value) <= 3.0 * est.std_error);
  }
  SUBCASE("the zero predictor pays ||theta*||^2") {
    const Vector zero(6, 0.0);
    const auto est = mc_excess_risk(params, zero, m, {1, "mc", 1});
    CHECK(std::abs(est.value - 1.0) <= 3.0 * est.std_error);
    CHECK(est.samples == m);
  }
  SUBCASE("an arbitrary estimate matches the exact formula") {
    const Vector theta{0.3, -0.4, 0.0, 1.0, 0.5, -2.0};
    const double exact = excess_risk(params, theta).total;
    const auto est = mc_excess_risk(params, theta, m, {1, "mc", 2});
    CHECK(std::abs(est.value - exact) <= 3.0 * est.std_error);
  }
}
