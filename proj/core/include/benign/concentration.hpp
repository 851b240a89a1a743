#pragma once

#include <cstdint>
#include <optional>

#include "benign/numerics.hpp"
#include "benign/scenario.hpp"

namespace benign {

/// Outcome of a Monte Carlo check of a one-sided probability bound.
struct TailCheckReport {
  std::size_t trials = 0;
  double threshold = 0.0;
  /// Fraction of trials in which the guaranteed event held.
  double empirical_rate = 0.0;
  double claimed_rate = 0.0;
  /// 3 sqrt(r (1 - r) / trials) at r = claimed_rate.
  double mc_half_width = 0.0;
  /// Set by the sparse blow-up check only; descriptive, not a certified
  /// constant.
  std::optional<double> fitted_c;

  bool consistent() const { return empirical_rate >= claimed_rate - mc_half_width; }
};

double binomial_half_width(double rate, std::size_t trials);

/// Fraction of chi^2(n) draws with q >= n - 2 sqrt(t n); claimed 1 - e^-t.
TailCheckReport chi2_tail_check(std::size_t n, double t, std::size_t trials,
                                std::uint64_t seed);

/// Fraction of generated datasets with
/// ||y||^2 >= (sigma^2 + ||theta*||^2) n (1 - 2 sqrt(ln(1/delta) / n));
/// claimed 1 - delta.
TailCheckReport y_norm_lower_check(const ScenarioParams& params, double delta,
                                   std::size_t trials, std::uint64_t seed);

/// Fraction of n x k standard Gaussian matrices with
/// op_norm <= sqrt(n) + sqrt(k) + sqrt(2 ln(2/delta)); claimed 1 - delta.
TailCheckReport head_opnorm_check(std::size_t n, std::size_t k, double delta,
                                  std::size_t trials, std::uint64_t seed);

enum class SearchMode { Exhaustive, Heuristic };

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

struct SparseSearchOptions {
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  /// Random greedy restarts in heuristic mode, on top of the start from the
  /// longest column.
  int restarts = 8;
  std::uint64_t seed = 0x5EEDULL;
};

struct SparseOpNormReport {
  std::size_t s = 0;
  double value = 0.0;
  /// Column indices of X (not tail-relative), ascending.
  IndexSet attaining_set;
  bool exhaustive = false;
  std::optional<double> bound_value;
  std::optional<double> fitted_c;
};

/// Number of size-s subsets of an m-set, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t m, std::uint64_t s);

/// max over S within columns [tail_start, cols) with |S| = s of ||X_S||_op.
/// The maximum over |S| <= s is the same number because appending a column
/// never lowers the operator norm. Exhaustive mode throws BudgetExceeded when
/// C(|T|, s) exceeds the cap; heuristic mode returns a lower bound found by
/// greedy column addition.
SparseOpNormReport sparse_opnorm_max(const Matrix& x, std::size_t tail_start, std::size_t s,
                                     SearchMode mode, const SparseSearchOptions& options = {});

/// sqrt(eps) (sqrt(s) ln(3 (p - k) / s) + sqrt(n) + t)
double sparse_blowup_scale(const ScenarioParams& params, std::size_t s, double t);

/// Fits the smallest constant c for which the blow-up event
/// max_S ||X_S||_op <= c * sparse_blowup_scale held in a 1 - e^-t fraction of
/// trials, i.e. the (1 - e^-t)-quantile of the per-trial ratio.
TailCheckReport sparse_blowup_check(const ScenarioParams& params, std::size_t s, double t,
                                    std::size_t trials, std::uint64_t seed,
                                    std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace benign
