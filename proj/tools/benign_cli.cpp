// Command-line front end: generate, solve, risk, sweep, concentration and
// sparsify. Failures print {"error": <category>, ...} on stderr and exit with
// a category-specific status.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "benign/error.hpp"
#include "benign/harness.hpp"
#include "benign/io.hpp"

using namespace benign;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_config = true) {
  if (with_config) cmd->add_option("--config", c.config, "Configuration document (JSON)");
  cmd->add_option("--seed", c.seed, "Master seed (overrides the config)");
  cmd->add_option("--out", c.out, "Output path; stdout when omitted");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  else
    io::write_file(path, text);
}

Dataset load_dataset(const std::string& path) { return io::parse_dataset(io::read_file(path)); }

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

// -- generate ----------------------------------------------------------------

struct GenerateArgs {
  Common common;
  std::optional<std::size_t> k, p, n;
  std::optional<double> eps, sigma, theta_norm;
  std::uint64_t index = 0;
};

void run_generate(const GenerateArgs& a) {
  ScenarioParams params;
  if (!a.common.config.empty()) {
    params = io::parse_scenario_params(io::read_file(a.common.config));
  } else {
    require(a.k && a.p && a.n && a.eps, "generate needs --config or all of --k --p --n --eps");
    params = ScenarioParams::with_symmetric_head(*a.k, *a.p, *a.n, *a.eps, a.sigma.value_or(1.0),
                                                 a.theta_norm.value_or(1.0));
  }
  if (a.k || a.p || a.n || a.eps || a.theta_norm) {
    // Flags refine a config; the head is rebuilt from the resulting shape.
    const double norm = a.theta_norm.value_or(params.theta_star_norm());
    params = ScenarioParams::with_symmetric_head(a.k.value_or(params.k), a.p.value_or(params.p),
                                                 a.n.value_or(params.n),
                                                 a.eps.value_or(params.eps),
                                                 a.sigma.value_or(params.sigma), norm);
  } else if (a.sigma) {
    params.sigma = *a.sigma;
  }
  params.validate();
  const SeedSpec seed{a.common.seed.value_or(0), "trial", a.index};
  emit(a.common.out, io::dataset_json(generate(params, seed), seed));
}

// -- solve / risk / sparsify --------------------------------------------------

struct SolveArgs {
  Common common;
  std::string data;
  std::string method = "MIN_L1";
  std::string pivot_rule = "dantzig-bland";
  double zero_tol = kDefaultZeroTol;
  std::string theta_out;
};

LpOptions lp_options(const std::string& rule, double zero_tol) {
  LpOptions options;
  options.pivot_rule = parse_pivot_rule(rule);
  options.zero_tol = zero_tol;
  options.validate();
  return options;
}

void print_interpolant(const Common& c, const Interpolant& fit) {
  if (c.format == "csv") {
    std::ostringstream s;
    io::write_interpolant_csv(s, fit);
    emit(c.out, s.str());
  } else {
    emit(c.out, io::interpolant_json(fit));
  }
}

void run_solve(const SolveArgs& a) {
  const Dataset data = load_dataset(a.data);
  const Method method = parse_method(a.method);
  Interpolant fit;
  switch (method) {
    case Method::MinL2: fit = min_l2(data.x, data.y); break;
    case Method::MinL1: fit = min_l1(data.x, data.y, lp_options(a.pivot_rule, a.zero_tol)); break;
    default: fail(ErrorCode::Validation, "solve supports MIN_L2 and MIN_L1");
  }
  if (method == Method::MinL2 && a.zero_tol != kDefaultZeroTol)
    fit = describe(data.x, data.y, fit.theta_hat, method, a.zero_tol);
  if (!a.theta_out.empty()) io::write_file(a.theta_out, io::theta_json(fit.theta_hat, method));
  print_interpolant(a.common, fit);
}

struct RiskArgs {
  Common common;
  std::string data;
  std::string theta;
  std::size_t mc_samples = 0;
};

void run_risk(const RiskArgs& a) {
  const Dataset data = load_dataset(a.data);
  const io::ThetaFile theta = io::parse_theta(io::read_file(a.theta));
  const RiskReport report = excess_risk(data.params, theta.theta, theta.method);
  if (a.common.format == "csv") {
    std::ostringstream s;
    io::write_risk_csv(s, report);
    emit(a.common.out, s.str());
  } else {
    std::optional<McRiskEstimate> mc;
    if (a.mc_samples > 0)
      mc = mc_excess_risk(data.params, theta.theta, a.mc_samples,
                          {a.common.seed.value_or(0), "mc-cli", 0});
    const std::string text = io::risk_json(report, mc);
    emit(a.common.out, text);
  }
}

struct SparsifyArgs {
  Common common;
  std::string data;
  std::string theta;
  double zero_tol = kDefaultZeroTol;
  std::string theta_out;
};

void run_sparsify(const SparsifyArgs& a) {
  const Dataset data = load_dataset(a.data);
  const io::ThetaFile theta = io::parse_theta(io::read_file(a.theta));
  LpOptions options;
  options.zero_tol = a.zero_tol;
  options.validate();
  const Interpolant fit = sparsify(data.x, theta.theta, options);
  if (!a.theta_out.empty())
    io::write_file(a.theta_out, io::theta_json(fit.theta_hat, Method::Sparsified));
  print_interpolant(a.common, fit);
}

// -- sweep --------------------------------------------------------------------

struct SweepArgs {
  Common common;
  std::string plot;
  bool timing = false;
};

void run_sweep_command(const SweepArgs& a) {
  require(!a.common.config.empty(), "sweep needs --config");
  ExperimentConfig config = io::parse_experiment_config(io::read_file(a.common.config));
  if (a.common.seed) config.master_seed = *a.common.seed;
  config.validate();
  const std::string out = a.common.out.empty() ? config.output_path : a.common.out;

  const SweepOptions options{a.common.threads, a.timing};
  const auto start = std::chrono::steady_clock::now();
  const SweepResult result = run_sweep(config, options);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

  std::vector<AggregateRow> aggregates;
  const bool any_ok = std::any_of(result.rows.begin(), result.rows.end(),
                                  [](const ResultRow& r) { return r.ok(); });
  if (any_ok) aggregates = aggregate(result.rows);

  std::ostringstream rows_text, agg_text;
  if (a.common.format == "csv") {
    io::write_results_csv(rows_text, result.rows);
    io::write_aggregate_csv(agg_text, aggregates);
  } else {
    rows_text << io::results_json(result.rows);
    agg_text << io::aggregates_json(aggregates);
  }
  emit(out, rows_text.str());
  if (!out.empty()) {
    const std::string ext = a.common.format == "csv" ? ".csv" : ".json";
    io::write_file(sibling(out, ".aggregates" + ext), agg_text.str());
    io::write_file(sibling(out, ".meta.json"),
                   io::sweep_metadata_json(config, result, options, wall));
  }
  if (!a.plot.empty()) {
    require(!aggregates.empty(), "no successful rows to plot");
    io::write_file(a.plot, io::risk_plot_svg(aggregates));
  }
}

// -- concentration -------------------------------------------------------------

struct ConcentrationArgs {
  Common common;
  std::optional<std::size_t> trials;
};

void run_concentration(const ConcentrationArgs& a) {
  ConcentrationConfig config;
  if (!a.common.config.empty())
    config = io::parse_concentration_config(io::read_file(a.common.config));
  if (a.common.seed) config.master_seed = *a.common.seed;
  if (a.trials) config.trials = *a.trials;
  config.validate();
  const auto checks = concentration_suite(config);
  if (a.common.format == "csv") {
    std::ostringstream s;
    io::write_concentration_csv(s, checks);
    emit(a.common.out, s.str());
  } else {
    emit(a.common.out, io::concentration_json(checks));
  }
  for (const auto& c : checks)
    if (c.error) std::cerr << "warning: " << c.name << ": " << c.message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolation risk lab for Gaussian overparameterized regression"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Draw a dataset and write it to a file");
  add_common(g, gen.common);
  g->add_option("--k", gen.k, "Head dimension");
  g->add_option("--p", gen.p, "Number of features");
  g->add_option("--n", gen.n, "Number of samples");
  g->add_option("--eps", gen.eps, "Tail variance");
  g->add_option("--sigma", gen.sigma, "Noise level");
  g->add_option("--theta-norm", gen.theta_norm, "Norm of the head signal");
  g->add_option("--index", gen.index, "Stream index under the seed");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Fit an interpolator to a dataset");
  add_common(s, solve.common, false);
  s->add_option("--data", solve.data, "Dataset document")->required();
  s->add_option("--method", solve.method, "MIN_L2 or MIN_L1");
  s->add_option("--pivot-rule", solve.pivot_rule, "bland or dantzig-bland");
  s->add_option("--zero-tol", solve.zero_tol, "Support threshold scale");
  s->add_option("--theta-out", solve.theta_out, "Write the fitted theta here");

  RiskArgs risk;
  auto* r = app.add_subcommand("risk", "Exact excess risk of a theta file");
  add_common(r, risk.common, false);
  r->add_option("--data", risk.data, "Dataset document (for the scenario)")->required();
  r->add_option("--theta", risk.theta, "Theta document")->required();
  r->add_option("--mc", risk.mc_samples, "Also estimate the risk from this many fresh draws");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Run an experiment sweep");
  add_common(w, sweep.common);
  w->add_option("--plot", sweep.plot, "Write a log-log SVG of median risk");
  w->add_flag("--timing", sweep.timing, "Record wall-clock solve times");

  ConcentrationArgs conc;
  auto* c = app.add_subcommand("concentration", "Run the concentration validators");
  add_common(c, conc.common);
  c->add_option("--trials", conc.trials, "Trials per check");

  SparsifyArgs sp;
  auto* z = app.add_subcommand("sparsify", "Reduce an interpolant to at most n nonzeros");
  add_common(z, sp.common, false);
  z->add_option("--data", sp.data, "Dataset document")->required();
  z->add_option("--theta", sp.theta, "Theta document")->required();
  z->add_option("--zero-tol", sp.zero_tol, "Support threshold scale");
  z->add_option("--theta-out", sp.theta_out, "Write the reduced theta here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << io::error_json(to_string(ErrorCode::Validation), e.what()) << '\n';
    return exit_status(ErrorCode::Validation);
  }

  try {
    if (*g) run_generate(gen);
    else if (*s) run_solve(solve);
    else if (*r) run_risk(risk);
    else if (*w) run_sweep_command(sweep);
    else if (*c) run_concentration(conc);
    else if (*z) run_sparsify(sp);
  } catch (const Error& e) {
    std::cerr << io::error_json(to_string(e.code()), e.what()) << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << io::error_json("Internal", e.what()) << '\n';
    return 1;
  }
  return 0;
}
