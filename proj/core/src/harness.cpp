#include "benign/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <cmath>
#include <map>
#include <thread>

#include "benign/scenario.hpp"

namespace benign {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Explicit: return "EXPLICIT";
    case Regime::SquareLaw: return "SQUARE_LAW";
  }
  return "UNKNOWN";
}

void ExperimentConfig::validate() const {
  require(!n_values.empty(), "n_values must be nonempty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    require(n_values[i] >= 1, "n_values must be positive");
    if (i > 0) require(n_values[i] > n_values[i - 1], "n_values must be strictly increasing");
  }
  require(k >= 1, "k must be at least 1");
  if (regime == Regime::SquareLaw) {
    require(!eps.has_value(), "SQUARE_LAW regime fixes eps = 1/n^2");
    require(!p.has_value(), "SQUARE_LAW regime fixes p = n^2");
  }
  if (eps) require(std::isfinite(*eps) && *eps > 0.0, "eps must be positive");
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be nonnegative");
  require(std::isfinite(theta_star_norm) && theta_star_norm >= 0.0,
          "theta_star_norm must be nonnegative");
  require(!methods.empty(), "methods must be nonempty");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    require(methods[i] == Method::MinL2 || methods[i] == Method::MinL1,
            "sweep methods are MIN_L2 and MIN_L1");
    for (std::size_t j = 0; j < i; ++j) require(methods[i] != methods[j], "duplicate method");
  }
  require(trials >= 1, "trials must be at least 1");
  require(zero_tol > 0.0, "zero_tol must be positive");
}

double ExperimentConfig::eps_at(std::size_t n) const {
  if (eps) return *eps;
  const double dn = static_cast<double>(n);
  return 1.0 / (dn * dn);
}

std::size_t ExperimentConfig::p_at(std::size_t n) const { return p ? *p : n * n; }

std::uint64_t trial_stream_index(std::size_t n, std::size_t trial) {
  return (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(trial);
}

namespace {

std::string precondition_flags(const ScenarioParams& params) {
  BoundInputs inputs;
  inputs.s = static_cast<double>(params.n);
  inputs.delta = kSweepDelta;
  inputs.c1 = kSweepC1;
  std::string flags;
  for (const auto& check : theorem_preconditions(params, inputs))
    flags.push_back(check.passed ? '1' : '0');
  return flags;
}

void fill_failure(ResultRow& row, std::string status) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  row.status = std::move(status);
  row.excess_risk_total = row.head_term = row.tail_term = nan;
  row.l1_norm = row.l2_norm = row.residual = nan;
  row.support_size = 0;
}

struct Point {
  std::size_t n;
  ScenarioParams params;
  std::string flags;
};

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, const SweepOptions& options) {
  config.validate();
  SweepResult result;

  std::vector<Point> points;
  for (std::size_t n : config.n_values) {
    const std::size_t p = config.p_at(n);
    if (p < n) {
      result.warnings.push_back("skipping n=" + std::to_string(n) + ": p=" + std::to_string(p) +
                                " < n");
      continue;
    }
    if (p < config.k) {
      result.warnings.push_back("skipping n=" + std::to_string(n) + ": p=" + std::to_string(p) +
                                " < k");
      continue;
    }
    ScenarioParams params = ScenarioParams::with_symmetric_head(
        config.k, p, n, config.eps_at(n), config.sigma, config.theta_star_norm);
    std::string flags = precondition_flags(params);
    points.push_back({n, std::move(params), std::move(flags)});
  }

  const std::size_t methods = config.methods.size();
  const std::size_t trials = config.trials;
  result.rows.resize(points.size() * methods * trials);
  auto slot = [&](std::size_t point, std::size_t method, std::size_t trial) -> ResultRow& {
    return result.rows[(point * methods + method) * trials + trial];
  };

  LpOptions lp;
  lp.zero_tol = config.zero_tol;

  auto run_cell = [&](std::size_t cell) {
    const std::size_t point_index = cell / trials;
    const std::size_t trial = cell % trials;
    const Point& point = points[point_index];
    const SeedSpec seed{config.master_seed, "trial", trial_stream_index(point.n, trial)};
    const Dataset data = generate(point.params, seed);

    for (std::size_t m = 0; m < methods; ++m) {
      ResultRow& row = slot(point_index, m, trial);
      row.n = point.n;
      row.p = point.params.p;
      row.k = point.params.k;
      row.eps = point.params.eps;
      row.sigma = point.params.sigma;
      row.method = config.methods[m];
      row.trial_index = trial;
      row.seed = derive_seed(seed);
      row.precondition_flags = point.flags;

      const auto start = std::chrono::steady_clock::now();
      try {
        const Interpolant fit = row.method == Method::MinL2
                                    ? min_l2(data.x, data.y)
                                    : min_l1(data.x, data.y, lp);
        const auto stop = std::chrono::steady_clock::now();
        if (options.record_timing)
          row.solve_seconds = std::chrono::duration<double>(stop - start).count();
        const RiskReport risk = excess_risk(point.params, fit.theta_hat, row.method);
        row.excess_risk_total = risk.total;
        row.head_term = risk.head_term;
        row.tail_term = risk.tail_term;
        row.support_size = support(fit.theta_hat, config.zero_tol).size();
        row.l1_norm = fit.l1_norm;
        row.l2_norm = fit.l2_norm;
        row.residual = fit.residual;
        if (config.mc_check_samples > 0) {
          const McRiskEstimate mc = mc_excess_risk(
              point.params, fit.theta_hat, config.mc_check_samples,
              {config.master_seed, "mc-" + std::string(to_string(row.method)), seed.index});
          row.mc_risk = mc.value;
          row.mc_std_error = mc.std_error;
        }
      } catch (const Error& e) {
        fill_failure(row, std::string(to_string(e.code())));
      }
    }
  };

  const std::size_t cells = points.size() * trials;
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                          static_cast<unsigned>(cells)));
  if (threads <= 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) run_cell(cell);
      });
    }
    for (auto& worker : workers) worker.join();
  }
  return result;
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double position = q * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double frac = position - static_cast<double>(lower);
  return values[lower] + frac * (values[upper] - values[lower]);
}

std::optional<double> log_log_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double count = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows) {
  require(!rows.empty(), "aggregate needs at least one row");

  struct Group {
    std::size_t n = 0;
    Method method = Method::MinL2;
    std::size_t p = 0;
    std::size_t k = 0;
    double eps = 0.0;
    double sigma = 0.0;
    std::vector<double> risks;
    std::vector<double> constants;
    double support_total = 0.0;
  };
  // Keyed by (n, first appearance of the method) so output keeps row order.
  std::vector<Method> method_order;
  std::map<std::pair<std::size_t, std::size_t>, Group> groups;
  for (const ResultRow& row : rows) {
    auto found = std::find(method_order.begin(), method_order.end(), row.method);
    std::size_t method_rank = static_cast<std::size_t>(found - method_order.begin());
    if (found == method_order.end()) method_order.push_back(row.method);
    Group& group = groups[{row.n, method_rank}];
    group.n = row.n;
    group.method = row.method;
    group.p = row.p;
    group.k = row.k;
    group.eps = row.eps;
    group.sigma = row.sigma;
    if (!row.ok()) continue;
    group.risks.push_back(row.excess_risk_total);
    group.support_total += static_cast<double>(row.support_size);
    if (row.sigma > 0.0 && row.support_size >= 1 && row.support_size <= row.p) {
      group.constants.push_back(empirical_constant(
          row.excess_risk_total, row.sigma, static_cast<double>(row.n),
          static_cast<double>(row.support_size), static_cast<double>(row.p)));
    }
  }

  std::vector<AggregateRow> out;
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> curves;
  for (const auto& [key, group] : groups) {
    if (group.risks.empty()) continue;
    AggregateRow agg;
    agg.n = group.n;
    agg.method = group.method;
    agg.trials = group.risks.size();
    double sum = 0.0;
    for (double r : group.risks) sum += r;
    agg.mean_risk = sum / static_cast<double>(agg.trials);
    agg.median_risk = quantile(group.risks, 0.5);
    agg.q10_risk = quantile(group.risks, 0.1);
    agg.q90_risk = quantile(group.risks, 0.9);
    agg.mean_support = group.support_total / static_cast<double>(agg.trials);
    const auto dn = static_cast<double>(group.n);
    const auto dp = static_cast<double>(group.p);
    agg.ols_curve_value = ols_theory_curve(static_cast<double>(group.k), dn, dp, group.eps);
    agg.bp_lower_curve_value = sparse_lower_curve(group.sigma, dn, dn, dp);
    if (!group.constants.empty()) agg.empirical_constant_estimate = quantile(group.constants, 0.5);
    curves[key.second].first.push_back(dn);
    curves[key.second].second.push_back(agg.median_risk);
    out.push_back(agg);
  }

  for (AggregateRow& agg : out) {
    const auto rank = static_cast<std::size_t>(
        std::find(method_order.begin(), method_order.end(), agg.method) - method_order.begin());
    const auto& [ns, medians] = curves[rank];
    agg.fitted_log_slope = log_log_slope(ns, medians);
  }
  // Output grouped by method, ascending n within each.
  std::stable_sort(out.begin(), out.end(), [&](const AggregateRow& a, const AggregateRow& b) {
    auto ra = std::find(method_order.begin(), method_order.end(), a.method);
    auto rb = std::find(method_order.begin(), method_order.end(), b.method);
    if (a.n != b.n) return a.n < b.n;
    return ra < rb;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Concentration bundle
// ---------------------------------------------------------------------------

void ConcentrationConfig::validate() const {
  require(n >= 1 && k >= 1, "concentration: n and k must be positive");
  require(!p || *p >= k, "concentration: p must be at least k");
  require(eps > 0.0 && sigma >= 0.0 && theta_star_norm >= 0.0,
          "concentration: eps > 0, sigma >= 0 and theta_star_norm >= 0 required");
  require(delta > 0.0 && delta < 1.0, "concentration: delta must lie in (0, 1)");
  require(t > 0.0, "concentration: t must be positive");
  require(trials >= 1, "concentration: trials must be positive");
  require(sparse_n >= 1 && sparse_tail >= 1, "concentration: sparse sizes must be positive");
  require(sparse_s >= 1 && sparse_s <= sparse_tail,
          "concentration: sparse s must satisfy 1 <= s <= tail");
}

std::vector<NamedCheck> concentration_suite(const ConcentrationConfig& config) {
  config.validate();
  std::vector<NamedCheck> checks;
  auto run = [&](std::string name, auto&& body) {
    NamedCheck check;
    check.name = std::move(name);
    try {
      check.report = body();
    } catch (const Error& e) {
      check.error = e.code();
      check.message = e.what();
    }
    checks.push_back(std::move(check));
  };

  run("chi2_tail", [&] {
    return chi2_tail_check(config.n, config.t, config.trials, config.master_seed);
  });
  run("y_norm_lower", [&] {
    const ScenarioParams params = ScenarioParams::with_symmetric_head(
        config.k, config.p.value_or(config.n + config.k), config.n, config.eps, config.sigma,
        config.theta_star_norm);
    return y_norm_lower_check(params, config.delta, config.trials, config.master_seed);
  });
  run("head_opnorm", [&] {
    return head_opnorm_check(config.n, config.k, config.delta, config.trials,
                             config.master_seed);
  });
  run("sparse_blowup", [&] {
    const ScenarioParams params = ScenarioParams::with_symmetric_head(
        config.k, config.k + config.sparse_tail, config.sparse_n, config.eps, config.sigma,
        config.theta_star_norm);
    return sparse_blowup_check(params, config.sparse_s, config.t, config.trials,
                               config.master_seed, config.enumeration_cap);
  });
  return checks;
}

}  // namespace benign
