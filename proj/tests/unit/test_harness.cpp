#include <cmath>
#include <sstream>

#include "doctest.h"

#include "benign/error.hpp"
#include "benign/harness.hpp"
#include "benign/io.hpp"

using namespace benign;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig config;
  config.regime = Regime::Explicit;
  config.n_values = {6, 10};
  config.k = 2;
  config.eps = 0.1;
  config.p = 40;
  config.trials = 3;
  config.master_seed = 99;
  return config;
}

std::string csv_of(const SweepResult& result) {
  std::ostringstream out;
  io::write_results_csv(out, result.rows);
  return out.str();
}

ResultRow row_at(std::size_t n, Method method, double risk) {
  ResultRow row;
  row.n = n;
  row.p = n * n;
  row.k = 5;
  row.eps = 1.0 / static_cast<double>(n * n);
  row.sigma = 1.0;
  row.method = method;
  row.excess_risk_total = risk;
  row.support_size = n;
  return row;
}

bool rejects(const ExperimentConfig& config) {
  try {
    config.validate();
  } catch (const Error& e) {
    return e.code() == ErrorCode::Validation;
  }
  return false;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(small_config().validate());
  auto c = small_config();
  c.n_values = {10, 6};
  CHECK(rejects(c));
  c = small_config();
  c.n_values.clear();
  CHECK(rejects(c));
  c = small_config();
  c.regime = Regime::SquareLaw;
  CHECK(rejects(c));  // explicit eps and p under the square law
  c.eps.reset();
  c.p.reset();
  CHECK_NOTHROW(c.validate());
  CHECK(c.p_at(8) == 64);
  CHECK(c.eps_at(8) == doctest::Approx(1.0 / 64));
  c = small_config();
  c.methods = {Method::MinL1, Method::MinL1};
  CHECK(rejects(c));
  c = small_config();
  c.trials = 0;
  CHECK(rejects(c));
}

TEST_CASE("trial stream index separates n and trial") {
  CHECK(trial_stream_index(16, 0) != trial_stream_index(32, 0));
  CHECK(trial_stream_index(16, 1) != trial_stream_index(16, 0));
}

TEST_CASE("sweep rows are ordered and consistent") {
  const auto config = small_config();
  const auto result = run_sweep(config);
  REQUIRE(result.rows.size() == 2 * 2 * 3);
  CHECK(result.warnings.empty());
  std::size_t i = 0;
  for (std::size_t n : config.n_values)
    for (Method m : config.methods)
      for (std::size_t t = 0; t < 3; ++t, ++i) {
        const auto& row = result.rows[i];
        CHECK(row.n == n);
        CHECK(row.method == m);
        CHECK(row.trial_index == t);
        CHECK(row.ok());
        CHECK(row.excess_risk_total == doctest::Approx(row.head_term + row.tail_term));
        CHECK(row.excess_risk_total >= 0.0);
        CHECK(row.residual <= 1e-8 * 10);
        CHECK(row.precondition_flags.size() == 4);
        CHECK(row.solve_seconds == 0.0);
        if (m == Method::MinL1) CHECK(row.support_size <= n);
      }
  // Both methods see the same data for a given (n, trial).
  CHECK(result.rows[0].seed == result.rows[3].seed);
}

TEST_CASE("sweep output is deterministic and thread independent") {
  const auto config = small_config();
  const std::string once = csv_of(run_sweep(config));
  CHECK(once == csv_of(run_sweep(config)));
  CHECK(once == csv_of(run_sweep(config, {4, false})));
}

TEST_CASE("adding a sweep point leaves other points unchanged") {
  auto config = small_config();
  const auto base = run_sweep(config);
  config.n_values = {6, 8, 10};
  const auto more = run_sweep(config);
  for (const auto& row : base.rows) {
    bool found = false;
    for (const auto& other : more.rows)
      if (other.n == row.n && other.method == row.method && other.trial_index == row.trial_index) {
        CHECK(other.excess_risk_total == row.excess_risk_total);
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("zero problem gives zero risk and zero estimates") {
  auto config = small_config();
  config.sigma = 0.0;
  config.theta_star_norm = 0.0;
  for (const auto& row : run_sweep(config).rows) {
    CHECK(row.excess_risk_total == 0.0);
    CHECK(row.l1_norm == 0.0);
    CHECK(row.support_size == 0);
  }
}

TEST_CASE("points with too few features are skipped with a warning") {
  auto config = small_config();
  config.p = 8;
  const auto result = run_sweep(config);
  CHECK(result.warnings.size() == 1);
  for (const auto& row : result.rows) CHECK(row.n == 6);
}

TEST_CASE("Monte Carlo cross-check columns") {
  auto config = small_config();
  config.n_values = {6};
  config.trials = 1;
  config.mc_check_samples = 100'000;
  for (const auto& row : run_sweep(config).rows) {
    REQUIRE(row.mc_risk.has_value());
    REQUIRE(row.mc_std_error.has_value());
    CHECK(std::abs(*row.mc_risk - row.excess_risk_total) <= 4.0 * *row.mc_std_error);
  }
}

TEST_CASE("quantiles") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.1) == doctest::Approx(1.4));
  CHECK(quantile({7.0}, 0.9) == 7.0);
  CHECK_THROWS_AS(quantile({}, 0.5), Error);
}

TEST_CASE("aggregation") {
  SUBCASE("single row") {
    const std::vector<ResultRow> rows{row_at(16, Method::MinL2, 0.3)};
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].mean_risk == 0.3);
    CHECK(agg[0].median_risk == 0.3);
    CHECK(agg[0].q10_risk == 0.3);
    CHECK(agg[0].q90_risk == 0.3);
    CHECK(agg[0].trials == 1);
    CHECK_FALSE(agg[0].fitted_log_slope.has_value());
    REQUIRE(agg[0].empirical_constant_estimate.has_value());
    CHECK(*agg[0].empirical_constant_estimate ==
          doctest::Approx(empirical_constant(0.3, 1.0, 16, 16, 256)));
    CHECK(agg[0].ols_curve_value == doctest::Approx(ols_theory_curve(5, 16, 256, 1.0 / 256)));
    CHECK(agg[0].bp_lower_curve_value == doctest::Approx(sparse_lower_curve(1, 16, 16, 256)));
  }
  SUBCASE("halving risk when n doubles gives slope -1") {
    const std::vector<ResultRow> rows{row_at(16, Method::MinL1, 0.8),
                                      row_at(32, Method::MinL1, 0.4)};
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 2);
    for (const auto& a : agg) {
      REQUIRE(a.fitted_log_slope.has_value());
      CHECK(*a.fitted_log_slope == doctest::Approx(-1.0).epsilon(1e-12));
    }
  }
  SUBCASE("failed rows are excluded") {
    auto failed = row_at(16, Method::MinL2, NAN);
    failed.status = "NotInterpolable";
    const std::vector<ResultRow> rows{row_at(16, Method::MinL2, 0.2), failed};
    const auto agg = aggregate(rows);
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].trials == 1);
    CHECK(agg[0].mean_risk == 0.2);
  }
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{1, 2, 4, 8};
  const std::vector<double> y{1, 0.25, 1.0 / 16, 1.0 / 64};
  CHECK(*log_log_slope(x, y) == doctest::Approx(-2.0));
  CHECK_FALSE(log_log_slope(std::vector<double>{1}, std::vector<double>{1}).has_value());
}

TEST_CASE("concentration suite isolates failures") {
  ConcentrationConfig config;
  config.n = 20;
  config.trials = 500;
  config.sparse_n = 10;
  config.sparse_tail = 40;
  config.sparse_s = 10;
  config.enumeration_cap = 1000;
  const auto checks = concentration_suite(config);
  REQUIRE(checks.size() == 4);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(checks[i].report.has_value());
    CHECK(checks[i].passed());
  }
  CHECK_FALSE(checks[3].passed());
  REQUIRE(checks[3].error.has_value());
  CHECK(*checks[3].error == ErrorCode::BudgetExceeded);
}

TEST_CASE("concentration suite with delta near one passes trivially") {
  ConcentrationConfig config;
  config.n = 20;
  config.trials = 200;
  config.delta = 1.0 - 1e-9;
  config.t = 1e-9;
  config.sparse_n = 10;
  config.sparse_tail = 6;
  config.sparse_s = 2;
  for (const auto& check : concentration_suite(config)) CHECK(check.passed());
}
