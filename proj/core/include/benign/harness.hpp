#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "benign/concentration.hpp"
#include "benign/error.hpp"
#include "benign/interpolators.hpp"
#include "benign/risk.hpp"

namespace benign {

enum class Regime { Explicit, SquareLaw };

std::string_view to_string(Regime regime);

/// Declarative sweep specification. In the square-law regime every point
/// uses p = n^2 and eps = 1/n^2.
struct ExperimentConfig {
  Regime regime = Regime::Explicit;
  std::vector<std::size_t> n_values;
  std::size_t k = 5;
  /// Explicit eps, or nullopt for the 1/n^2 rule.
  std::optional<double> eps;
  /// Explicit p, or nullopt for the n^2 rule.
  std::optional<std::size_t> p;
  double sigma = 1.0;
  double theta_star_norm = 1.0;
  std::vector<Method> methods{Method::MinL2, Method::MinL1};
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  double zero_tol = kDefaultZeroTol;
  std::string output_path;
  std::size_t mc_check_samples = 0;

  void validate() const;
  double eps_at(std::size_t n) const;
  std::size_t p_at(std::size_t n) const;
};

/// Constants the sweep uses when annotating rows with theorem preconditions.
inline constexpr double kSweepDelta = 0.05;
inline constexpr double kSweepC1 = 1.0;

/// Index feeding the per-trial seed. Depends on (n, trial) only, so adding or
/// removing sweep points never changes another point's data.
std::uint64_t trial_stream_index(std::size_t n, std::size_t trial);

struct ResultRow {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t k = 0;
  double eps = 0.0;
  double sigma = 0.0;
  Method method = Method::MinL2;
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  double excess_risk_total = 0.0;
  double head_term = 0.0;
  double tail_term = 0.0;
  std::size_t support_size = 0;
  double l1_norm = 0.0;
  double l2_norm = 0.0;
  double residual = 0.0;
  double solve_seconds = 0.0;
  /// One character per precondition ('1' pass, '0' fail), in the order
  /// returned by theorem_preconditions.
  std::string precondition_flags;
  /// "ok" or the error category of a failed solve.
  std::string status = "ok";
  std::optional<double> mc_risk;
  std::optional<double> mc_std_error;

  bool ok() const { return status == "ok"; }
};

struct SweepOptions {
  unsigned threads = 1;
  /// Wall-clock solve times make output files differ between runs, so they
  /// are only recorded on request; otherwise solve_seconds is 0.
  bool record_timing = false;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;
};

/// Rows are ordered by n, then method (in config order), then trial.
SweepResult run_sweep(const ExperimentConfig& config, const SweepOptions& options = {});

struct AggregateRow {
  std::size_t n = 0;
  Method method = Method::MinL2;
  std::size_t trials = 0;
  double mean_risk = 0.0;
  double median_risk = 0.0;
  double q10_risk = 0.0;
  double q90_risk = 0.0;
  double mean_support = 0.0;
  double ols_curve_value = 0.0;
  double bp_lower_curve_value = 0.0;
  std::optional<double> empirical_constant_estimate;
  std::optional<double> fitted_log_slope;
};

/// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Least-squares slope of log(y) against log(x); nullopt with fewer than two
/// usable points.
std::optional<double> log_log_slope(std::span<const double> x, std::span<const double> y);

/// Groups successful rows by (n, method). Failed rows are excluded from the
/// statistics.
std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows);

// ---------------------------------------------------------------------------
// Concentration bundle
// ---------------------------------------------------------------------------

struct ConcentrationConfig {
  std::size_t n = 100;
  std::size_t k = 5;
  /// Defaults to n + k.
  std::optional<std::size_t> p;
  double eps = 0.01;
  double sigma = 1.0;
  double theta_star_norm = 1.0;
  double delta = 0.05;
  double t = 1.0;
  std::size_t trials = 10'000;
  std::uint64_t master_seed = 0;

  // Sparse blow-up check: X is sparse_n x (k + sparse_tail).
  std::size_t sparse_n = 100;
  std::size_t sparse_tail = 12;
  std::size_t sparse_s = 3;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  void validate() const;
};

struct NamedCheck {
  std::string name;
  std::optional<TailCheckReport> report;
  std::optional<ErrorCode> error;
  std::string message;

  bool passed() const { return report.has_value() && report->consistent(); }
};

/// Runs the four lemma validators; a failure in one is recorded and does not
/// stop the others.
std::vector<NamedCheck> concentration_suite(const ConcentrationConfig& config);

}  // namespace benign
