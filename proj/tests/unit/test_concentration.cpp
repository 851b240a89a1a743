#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "benign/concentration.hpp"
#include "benign/error.hpp"

using namespace benign;

namespace {

// Every size-s subset of the tail, scored by the Jacobi oracle.
double double_loop_max(const Matrix& x, std::size_t tail_start, std::size_t s) {
  const std::size_t p = x.cols();
  std::vector<std::size_t> subset(s);
  for (std::size_t i = 0; i < s; ++i) subset[i] = tail_start + i;
  double best = 0.0;
  for (;;) {
    best = std::max(best, oracle::spectral_norm(x.select_columns(subset)));
    std::size_t i = s;
    while (i > 0 && subset[i - 1] == p - s + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < s; ++j) subset[j] = subset[j - 1] + 1;
  }
  return best;
}

}  // namespace

TEST_CASE("binomial coefficients saturate") {
  CHECK(binomial(12, 3) == 220);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(10000, 5000) == UINT64_MAX);
}

TEST_CASE("chi-squared tail check") {
  SUBCASE("nonpositive threshold always holds") {
    const auto r = chi2_tail_check(4, 1.0, 1000, 1);  // 4 - 2*2 = 0
    CHECK(r.threshold <= 0.0);
    CHECK(r.empirical_rate == 1.0);
    const auto big_t = chi2_tail_check(10, 50.0, 500, 1);
    CHECK(big_t.threshold < 0.0);
    CHECK(big_t.empirical_rate == 1.0);
  }
  SUBCASE("n = 100, t = 1") {
    const auto r = chi2_tail_check(100, 1.0, 100'000, 2);
    CHECK(r.claimed_rate == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(r.consistent());
    CHECK(r.empirical_rate >= 0.632 - r.mc_half_width);
  }
}

TEST_CASE("y-norm lower bound check") {
  SUBCASE("default scale") {
    const auto params = ScenarioParams::with_symmetric_head(5, 105, 100, 0.01, 1.0, 1.0);
    const auto r = y_norm_lower_check(params, 0.05, 10'000, 3);
    CHECK(r.empirical_rate >= 0.95 - r.mc_half_width);
  }
  SUBCASE("zero signal holds with equality") {
    const auto params = ScenarioParams::with_symmetric_head(1, 3, 5, 1.0, 0.0, 0.0);
    const auto r = y_norm_lower_check(params, 0.05, 100, 3);
    CHECK(r.threshold == 0.0);
    CHECK(r.empirical_rate == 1.0);
  }
  SUBCASE("tiny delta makes the threshold vacuous") {
    const auto params = ScenarioParams::with_symmetric_head(1, 3, 5, 1.0, 1.0, 1.0);
    const auto r = y_norm_lower_check(params, 1e-6, 1000, 3);
    CHECK(r.threshold < 0.0);
    CHECK(r.empirical_rate == 1.0);
  }
  SUBCASE("delta near one claims almost nothing") {
    const auto params = ScenarioParams::with_symmetric_head(1, 3, 5, 1.0, 1.0, 1.0);
    const auto r = y_norm_lower_check(params, 1.0 - 1e-6, 1000, 3);
    CHECK(r.claimed_rate < 1e-5);
    CHECK(r.consistent());
  }
  SUBCASE("delta outside (0, 1) is rejected") {
    const auto params = ScenarioParams::with_symmetric_head(1, 3, 5, 1.0, 1.0, 1.0);
    CHECK_THROWS_AS(y_norm_lower_check(params, 1.0, 10, 3), Error);
  }
}

TEST_CASE("head operator-norm check") {
  SUBCASE("k = 1 reduces to a chi variate") {
    const auto r = head_opnorm_check(50, 1, 0.05, 10'000, 4);
    CHECK(r.threshold ==
          doctest::Approx(std::sqrt(50.0) + 1.0 + std::sqrt(2.0 * std::log(40.0))));
    CHECK(r.empirical_rate >= 0.95 - r.mc_half_width);
  }
  SUBCASE("n = k = 2, delta = 0.5") {
    const auto r = head_opnorm_check(2, 2, 0.5, 10'000, 4);
    CHECK(r.empirical_rate >= 0.5 - r.mc_half_width);
    CHECK(r.empirical_rate > 0.9);
  }
}

TEST_CASE("half width follows the binomial formula") {
  const auto r = chi2_tail_check(20, 0.5, 400, 5);
  CHECK(r.mc_half_width == doctest::Approx(3.0 * std::sqrt(r.claimed_rate *
                                                           (1.0 - r.claimed_rate) / 400.0)));
}

TEST_CASE("sparse operator norm: boundary cases and the oracle") {
  auto stream = derive_stream({41, "sparse-test", 0});
  const Matrix x = oracle::gaussian_matrix(stream, 6, 11);  // head of 3, tail of 8
  const std::size_t tail_start = 3;

  const auto one = sparse_opnorm_max(x, tail_start, 1, SearchMode::Exhaustive);
  double max_col = 0.0;
  for (std::size_t j = tail_start; j < 11; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < 6; ++i) c += x(i, j) * x(i, j);
    max_col = std::max(max_col, std::sqrt(c));
  }
  CHECK(one.value == doctest::Approx(max_col).epsilon(1e-12));
  REQUIRE(one.attaining_set.size() == 1);
  CHECK(one.attaining_set[0] >= tail_start);

  IndexSet tail;
  for (std::size_t j = tail_start; j < 11; ++j) tail.push_back(j);
  const auto full = sparse_opnorm_max(x, tail_start, 8, SearchMode::Exhaustive);
  CHECK(full.value == doctest::Approx(op_norm(x.select_columns(tail))).epsilon(1e-10));

  double previous = 0.0;
  for (std::size_t s = 1; s <= 8; ++s) {
    const auto r = sparse_opnorm_max(x, tail_start, s, SearchMode::Exhaustive);
    CHECK(r.exhaustive);
    CHECK(r.value >= previous);
    CHECK(r.value == doctest::Approx(double_loop_max(x, tail_start, s)).epsilon(1e-9));
    CHECK(r.value == doctest::Approx(op_norm(x.select_columns(r.attaining_set))).epsilon(1e-12));
    previous = r.value;
    const auto scaled = sparse_opnorm_max(x.scaled(-3.0), tail_start, s, SearchMode::Exhaustive);
    CHECK(scaled.value == doctest::Approx(3.0 * r.value).epsilon(1e-10));
  }
}

TEST_CASE("heuristic search is a lower bound and usually exact") {
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto stream = derive_stream({41, "heuristic", seed});
    const Matrix x = oracle::gaussian_matrix(stream, 4, 8);
    const auto ex = sparse_opnorm_max(x, 0, 3, SearchMode::Exhaustive);
    const auto he = sparse_opnorm_max(x, 0, 3, SearchMode::Heuristic);
    CHECK_FALSE(he.exhaustive);
    CHECK(he.value <= ex.value * (1.0 + 1e-12));
    if (he.value >= ex.value * (1.0 - 1e-12)) ++exact;
  }
  CHECK(exact >= 90);
}

TEST_CASE("enumeration cap") {
  auto stream = derive_stream({41, "cap", 0});
  const Matrix x = oracle::gaussian_matrix(stream, 3, 30);
  SparseSearchOptions options;
  options.enumeration_cap = 100;
  CHECK_THROWS_AS(sparse_opnorm_max(x, 0, 3, SearchMode::Exhaustive, options), Error);
  try {
    sparse_opnorm_max(x, 0, 3, SearchMode::Exhaustive, options);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
  CHECK_NOTHROW(sparse_opnorm_max(x, 0, 3, SearchMode::Heuristic, options));
}

TEST_CASE("sparse blow-up check") {
  SUBCASE("small exhaustive instance") {
    const auto params = ScenarioParams::with_symmetric_head(2, 12, 4, 0.1, 1.0, 1.0);
    const auto r = sparse_blowup_check(params, 2, 1.0, 1000, 6);
    REQUIRE(r.fitted_c.has_value());
    CHECK(std::isfinite(*r.fitted_c));
    CHECK(*r.fitted_c > 0.0);
    CHECK(r.consistent());
  }
  SUBCASE("eps scaling leaves the fitted constant unchanged") {
    const auto a = ScenarioParams::with_symmetric_head(2, 12, 4, 0.1, 1.0, 1.0);
    const auto b = ScenarioParams::with_symmetric_head(2, 12, 4, 0.2, 1.0, 1.0);
    const auto ra = sparse_blowup_check(a, 2, 1.0, 300, 7);
    const auto rb = sparse_blowup_check(b, 2, 1.0, 300, 7);
    CHECK(*ra.fitted_c == doctest::Approx(*rb.fitted_c).epsilon(1e-12));
  }
  SUBCASE("large t drives the constant towards zero") {
    const auto params = ScenarioParams::with_symmetric_head(2, 12, 4, 0.1, 1.0, 1.0);
    double previous = INFINITY;
    for (double t : {10.0, 100.0, 1000.0}) {
      const auto r = sparse_blowup_check(params, 1, t, 200, 8);
      CHECK(*r.fitted_c < previous);
      previous = *r.fitted_c;
    }
    CHECK(previous < 0.01);
  }
  SUBCASE("over the cap") {
    const auto params = ScenarioParams::with_symmetric_head(2, 102, 4, 0.1, 1.0, 1.0);
    CHECK_THROWS_AS(sparse_blowup_check(params, 5, 1.0, 10, 9, 1000), Error);
  }
}
