// Pilot for the headline-separation thresholds: runs the square-law sweep once
// and bootstraps the per-method log-log slopes of median risk by resampling
// trials (jointly across methods, independently per n).
//
//   slope_pilot [master_seed] [resamples] [threads]

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <vector>

#include "benign/harness.hpp"

using namespace benign;

namespace {

double percentile(std::vector<double> v, double q) { return quantile(std::move(v), q); }

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20260101;
  const std::size_t resamples = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2000;
  const unsigned threads = argc > 3 ? static_cast<unsigned>(std::atoi(argv[3])) : 1;

  ExperimentConfig config;
  config.regime = Regime::SquareLaw;
  config.n_values = {16, 32, 64};
  config.k = 5;
  config.trials = 50;
  config.master_seed = seed;
  const SweepResult result = run_sweep(config, {threads, false});

  // risks[method][n index][trial]
  std::map<Method, std::vector<std::vector<double>>> risks;
  for (Method m : config.methods) risks[m].resize(config.n_values.size());
  for (const ResultRow& row : result.rows) {
    if (!row.ok()) {
      std::printf("failed row n=%zu trial=%zu: %s\n", row.n, row.trial_index, row.status.c_str());
      continue;
    }
    const auto idx = static_cast<std::size_t>(
        std::find(config.n_values.begin(), config.n_values.end(), row.n) -
        config.n_values.begin());
    risks[row.method][idx].push_back(row.excess_risk_total);
  }

  std::vector<double> ns(config.n_values.begin(), config.n_values.end());
  auto medians_of = [&](Method m, const std::vector<std::vector<std::size_t>>& pick) {
    std::vector<double> med;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      std::vector<double> sample;
      for (std::size_t t : pick[i]) sample.push_back(risks[m][i][t]);
      med.push_back(quantile(sample, 0.5));
    }
    return med;
  };

  std::vector<std::vector<std::size_t>> identity(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i)
    for (std::size_t t = 0; t < config.trials; ++t) identity[i].push_back(t);

  std::printf("master_seed %llu, %zu trials per point\n",
              static_cast<unsigned long long>(seed), config.trials);
  for (Method m : config.methods) {
    const auto med = medians_of(m, identity);
    std::printf("%-7s medians", std::string(to_string(m)).c_str());
    for (double v : med) std::printf(" %.4f", v);
    std::printf("  slope %.4f\n", *log_log_slope(ns, med));
  }

  RandomStream stream = derive_stream({seed, "pilot-bootstrap", 0});
  std::map<Method, std::vector<double>> slopes;
  std::size_t ratio_monotone = 0, l2_decreasing = 0;
  for (std::size_t b = 0; b < resamples; ++b) {
    std::vector<std::vector<std::size_t>> pick(ns.size());
    for (auto& p : pick)
      for (std::size_t t = 0; t < config.trials; ++t) p.push_back(stream.below(config.trials));
    const auto l2 = medians_of(Method::MinL2, pick);
    const auto l1 = medians_of(Method::MinL1, pick);
    slopes[Method::MinL2].push_back(*log_log_slope(ns, l2));
    slopes[Method::MinL1].push_back(*log_log_slope(ns, l1));
    bool mono = true, dec = true;
    for (std::size_t i = 1; i < ns.size(); ++i) {
      mono = mono && l1[i] / l2[i] >= l1[i - 1] / l2[i - 1];
      dec = dec && l2[i] < l2[i - 1];
    }
    ratio_monotone += mono;
    l2_decreasing += dec;
  }
  for (auto& [m, v] : slopes)
    std::printf("%-7s slope band: p0.5 %.4f  p2.5 %.4f  p50 %.4f  p97.5 %.4f  p99.5 %.4f\n",
                std::string(to_string(m)).c_str(), percentile(v, 0.005), percentile(v, 0.025),
                percentile(v, 0.5), percentile(v, 0.975), percentile(v, 0.995));
  std::printf("resamples with nondecreasing L1/L2 ratio: %.4f\n",
              static_cast<double>(ratio_monotone) / static_cast<double>(resamples));
  std::printf("resamples with strictly decreasing MIN_L2 median: %.4f\n",
              static_cast<double>(l2_decreasing) / static_cast<double>(resamples));
  return 0;
}
