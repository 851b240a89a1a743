#include "benign/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "benign/error.hpp"

namespace benign {

double binomial_half_width(double rate, std::size_t trials) {
  return 3.0 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

namespace {

TailCheckReport finish(std::size_t trials, double threshold, std::size_t hits,
                       double claimed) {
  TailCheckReport report;
  report.trials = trials;
  report.threshold = threshold;
  report.empirical_rate = static_cast<double>(hits) / static_cast<double>(trials);
  report.claimed_rate = claimed;
  report.mc_half_width = binomial_half_width(claimed, trials);
  return report;
}

void check_delta(double delta) {
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
}

}  // namespace

TailCheckReport chi2_tail_check(std::size_t n, double t, std::size_t trials,
                                std::uint64_t seed) {
  require(n >= 1, "chi-squared check needs n >= 1");
  require(t >= 0.0, "chi-squared check needs t >= 0");
  require(trials >= 1, "chi-squared check needs trials >= 1");
  const double dn = static_cast<double>(n);
  const double threshold = dn - 2.0 * std::sqrt(t * dn);
  std::size_t hits = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream stream = derive_stream({seed, "chi2", trial});
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = stream.normal();
      q += g * g;
    }
    if (q >= threshold) ++hits;
  }
  return finish(trials, threshold, hits, 1.0 - std::exp(-t));
}

TailCheckReport y_norm_lower_check(const ScenarioParams& params, double delta,
                                   std::size_t trials, std::uint64_t seed) {
  params.validate();
  check_delta(delta);
  require(trials >= 1, "y-norm check needs trials >= 1");
  const double dn = static_cast<double>(params.n);
  const double energy = params.sigma * params.sigma + std::pow(params.theta_star_norm(), 2);
  const double threshold = energy * dn * (1.0 - 2.0 * std::sqrt(std::log(1.0 / delta) / dn));
  std::size_t hits = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Dataset data = generate(params, {seed, "ynorm", trial});
    if (dot(data.y, data.y) >= threshold) ++hits;
  }
  return finish(trials, threshold, hits, 1.0 - delta);
}

TailCheckReport head_opnorm_check(std::size_t n, std::size_t k, double delta,
                                  std::size_t trials, std::uint64_t seed) {
  require(n >= 1 && k >= 1, "head operator-norm check needs n, k >= 1");
  check_delta(delta);
  require(trials >= 1, "head operator-norm check needs trials >= 1");
  const double threshold = std::sqrt(static_cast<double>(n)) +
                           std::sqrt(static_cast<double>(k)) +
                           std::sqrt(2.0 * std::log(2.0 / delta));
  std::size_t hits = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream stream = derive_stream({seed, "headop", trial});
    std::vector<double> entries(n * k);
    for (double& e : entries) e = stream.normal();
    if (op_norm(Matrix(n, k, std::move(entries))) <= threshold) ++hits;
  }
  return finish(trials, threshold, hits, 1.0 - delta);
}

std::uint64_t binomial(std::uint64_t m, std::uint64_t s) {
  if (s > m) return 0;
  s = std::min(s, m - s);
  __uint128_t result = 1;
  for (std::uint64_t i = 1; i <= s; ++i) {
    result = result * (m - s + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

// Largest eigenvalue of the principal submatrix of `gram` on `subset`.
double subset_eigenvalue(const Matrix& gram, std::span<const std::size_t> subset,
                         std::vector<double>& scratch) {
  const std::size_t s = subset.size();
  scratch.resize(s * s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) scratch[a * s + b] = gram(subset[a], subset[b]);
  return top_eigenvalue_psd(scratch, s);
}

}  // namespace

SparseOpNormReport sparse_opnorm_max(const Matrix& x, std::size_t tail_start, std::size_t s,
                                     SearchMode mode, const SparseSearchOptions& options) {
  require(!x.empty(), "sparse_opnorm_max: matrix must be nonempty");
  require(tail_start < x.cols(), "sparse_opnorm_max: tail must be nonempty");
  const std::size_t tail = x.cols() - tail_start;
  require(s >= 1 && s <= tail, "sparse_opnorm_max needs 1 <= s <= |T|");

  IndexSet tail_columns(tail);
  std::iota(tail_columns.begin(), tail_columns.end(), tail_start);
  const Matrix gram = column_gram(x.select_columns(tail_columns));

  SparseOpNormReport report;
  report.s = s;
  std::vector<double> scratch;
  double best = -1.0;
  IndexSet best_set;

  if (mode == SearchMode::Exhaustive) {
    if (binomial(tail, s) > options.enumeration_cap)
      fail(ErrorCode::BudgetExceeded, "C(" + std::to_string(tail) + ", " + std::to_string(s) +
                                          ") subsets exceed the enumeration cap");
    IndexSet subset(s);
    std::iota(subset.begin(), subset.end(), std::size_t{0});
    for (;;) {
      const double lambda = subset_eigenvalue(gram, subset, scratch);
      if (lambda > best) {
        best = lambda;
        best_set = subset;
      }
      // Advance to the next combination in lexicographic order.
      std::size_t i = s;
      while (i > 0 && subset[i - 1] == tail - s + i - 1) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < s; ++j) subset[j] = subset[j - 1] + 1;
    }
    report.exhaustive = true;
  } else {
    RandomStream stream(options.seed);
    std::vector<std::size_t> starts;
    std::size_t longest = 0;
    for (std::size_t j = 1; j < tail; ++j)
      if (gram(j, j) > gram(longest, longest)) longest = j;
    starts.push_back(longest);
    for (int r = 0; r < options.restarts; ++r) starts.push_back(stream.below(tail));

    for (std::size_t start : starts) {
      IndexSet current{start};
      double current_value = gram(start, start);
      while (current.size() < s) {
        double step_best = -1.0;
        IndexSet step_set;
        for (std::size_t j = 0; j < tail; ++j) {
          if (std::find(current.begin(), current.end(), j) != current.end()) continue;
          IndexSet candidate = current;
          candidate.insert(std::upper_bound(candidate.begin(), candidate.end(), j), j);
          const double lambda = subset_eigenvalue(gram, candidate, scratch);
          if (lambda > step_best) {
            step_best = lambda;
            step_set = std::move(candidate);
          }
        }
        current = std::move(step_set);
        current_value = step_best;
      }
      if (s == 1) current_value = subset_eigenvalue(gram, current, scratch);
      if (current_value > best) {
        best = current_value;
        best_set = current;
      }
    }
    report.exhaustive = false;
  }

  report.value = std::sqrt(std::max(best, 0.0));
  for (std::size_t j : best_set) report.attaining_set.push_back(j + tail_start);
  return report;
}

double sparse_blowup_scale(const ScenarioParams& params, std::size_t s, double t) {
  const double tail = static_cast<double>(params.p - params.k);
  const double ds = static_cast<double>(s);
  return std::sqrt(params.eps) * (std::sqrt(ds) * std::log(3.0 * tail / ds) +
                                  std::sqrt(static_cast<double>(params.n)) + t);
}

TailCheckReport sparse_blowup_check(const ScenarioParams& params, std::size_t s, double t,
                                    std::size_t trials, std::uint64_t seed,
                                    std::uint64_t enumeration_cap) {
  params.validate();
  require(params.p > params.k, "sparse blow-up check needs a nonempty tail");
  require(s >= 1 && s <= params.p - params.k, "sparse blow-up check needs 1 <= s <= p - k");
  require(t > 0.0, "sparse blow-up check needs t > 0");
  require(trials >= 1, "sparse blow-up check needs trials >= 1");
  if (binomial(params.p - params.k, s) > enumeration_cap)
    fail(ErrorCode::BudgetExceeded, "sparse blow-up check exceeds the enumeration cap");

  SparseSearchOptions options;
  options.enumeration_cap = enumeration_cap;
  const double scale = sparse_blowup_scale(params, s, t);
  std::vector<double> ratios(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Dataset data = generate(params, {seed, "blowup", trial});
    const SparseOpNormReport maximum =
        sparse_opnorm_max(data.x, params.k, s, SearchMode::Exhaustive, options);
    ratios[trial] = maximum.value / scale;
  }

  const double claimed = 1.0 - std::exp(-t);
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  auto rank = static_cast<std::size_t>(std::ceil(claimed * static_cast<double>(trials)));
  rank = std::clamp<std::size_t>(rank, 1, trials);
  const double fitted = sorted[rank - 1];

  const auto hits = static_cast<std::size_t>(
      std::count_if(ratios.begin(), ratios.end(), [&](double r) { return r <= fitted; }));
  TailCheckReport report = finish(trials, fitted * scale, hits, claimed);
  report.fitted_c = fitted;
  return report;
}

}  // namespace benign
