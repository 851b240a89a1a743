#include "benign/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace benign::io {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& message) {
  fail(ErrorCode::Validation, "config: " + message);
}

json parse_object(const std::string& text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Validation, std::string(what) + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Validation, std::string(what) + " must be a JSON object");
  return doc;
}

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const char* where) {
  for (const auto& item : doc.items())
    if (!allowed.contains(item.key()))
      bad_config(std::string("unknown key '") + item.key() + "' in " + where);
}

template <typename T>
T read_as(const json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    bad_config("key '" + key + "' has the wrong type");
  }
}

std::size_t read_count(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    bad_config("key '" + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::uint64_t read_seed(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string text = v.get<std::string>();
      const unsigned long long value = std::stoull(text, &used, 10);
      if (used != text.size()) throw std::invalid_argument(text);
      return value;
    } catch (const std::exception&) {
      bad_config("key '" + key + "' is not a 64-bit unsigned integer");
    }
  }
  return read_count(doc, key);
}

bool is_rule(const json& v, std::initializer_list<const char*> spellings) {
  if (!v.is_string()) return false;
  const std::string text = v.get<std::string>();
  for (const char* s : spellings)
    if (text == s) return true;
  return false;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  const json doc = parse_object(text, "experiment config");
  reject_unknown(doc,
                 {"regime", "n_values", "k", "eps_rule", "p_rule", "sigma", "theta_star_norm",
                  "methods", "trials", "master_seed", "zero_tol", "output_path",
                  "mc_check_samples"},
                 "experiment config");
  ExperimentConfig config;
  if (doc.contains("regime")) {
    const auto regime = read_as<std::string>(doc, "regime");
    if (regime == "EXPLICIT")
      config.regime = Regime::Explicit;
    else if (regime == "SQUARE_LAW")
      config.regime = Regime::SquareLaw;
    else
      bad_config("regime must be EXPLICIT or SQUARE_LAW");
  }
  if (!doc.contains("n_values") || !doc["n_values"].is_array())
    bad_config("n_values must be an array of counts");
  for (const json& v : doc["n_values"]) {
    if (!v.is_number_integer() || v.get<long long>() < 1)
      bad_config("n_values entries must be positive integers");
    config.n_values.push_back(v.get<std::size_t>());
  }
  if (doc.contains("k")) config.k = read_count(doc, "k");
  if (doc.contains("eps_rule")) {
    const json& v = doc["eps_rule"];
    if (v.is_number())
      config.eps = v.get<double>();
    else if (!is_rule(v, {"1/n^2", "1/n²", "1/n**2"}))
      bad_config("eps_rule must be a number or \"1/n^2\"");
  }
  if (doc.contains("p_rule")) {
    const json& v = doc["p_rule"];
    if (v.is_number_integer())
      config.p = read_count(doc, "p_rule");
    else if (!is_rule(v, {"n^2", "n²", "n**2"}))
      bad_config("p_rule must be an integer or \"n^2\"");
  }
  if (doc.contains("sigma")) config.sigma = read_as<double>(doc, "sigma");
  if (doc.contains("theta_star_norm"))
    config.theta_star_norm = read_as<double>(doc, "theta_star_norm");
  if (doc.contains("methods")) {
    if (!doc["methods"].is_array()) bad_config("methods must be an array");
    config.methods.clear();
    for (const json& v : doc["methods"]) {
      if (!v.is_string()) bad_config("methods entries must be strings");
      config.methods.push_back(parse_method(v.get<std::string>()));
    }
  }
  if (doc.contains("trials")) config.trials = read_count(doc, "trials");
  if (doc.contains("master_seed")) config.master_seed = read_seed(doc, "master_seed");
  if (doc.contains("zero_tol")) config.zero_tol = read_as<double>(doc, "zero_tol");
  if (doc.contains("output_path")) config.output_path = read_as<std::string>(doc, "output_path");
  if (doc.contains("mc_check_samples"))
    config.mc_check_samples = read_count(doc, "mc_check_samples");
  config.validate();
  return config;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  json doc;
  doc["regime"] = std::string(to_string(config.regime));
  doc["n_values"] = config.n_values;
  doc["k"] = config.k;
  if (config.eps)
    doc["eps_rule"] = *config.eps;
  else
    doc["eps_rule"] = "1/n^2";
  if (config.p)
    doc["p_rule"] = *config.p;
  else
    doc["p_rule"] = "n^2";
  doc["sigma"] = config.sigma;
  doc["theta_star_norm"] = config.theta_star_norm;
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(std::string(to_string(m)));
  doc["methods"] = methods;
  doc["trials"] = config.trials;
  doc["master_seed"] = config.master_seed;
  doc["zero_tol"] = config.zero_tol;
  doc["output_path"] = config.output_path;
  doc["mc_check_samples"] = config.mc_check_samples;
  return doc.dump(2);
}

ConcentrationConfig parse_concentration_config(const std::string& text) {
  const json doc = parse_object(text, "concentration config");
  reject_unknown(doc,
                 {"n", "k", "p", "eps", "sigma", "theta_star_norm", "delta", "t", "trials",
                  "master_seed", "sparse"},
                 "concentration config");
  ConcentrationConfig config;
  if (doc.contains("n")) config.n = read_count(doc, "n");
  if (doc.contains("k")) config.k = read_count(doc, "k");
  if (doc.contains("p")) config.p = read_count(doc, "p");
  if (doc.contains("eps")) config.eps = read_as<double>(doc, "eps");
  if (doc.contains("sigma")) config.sigma = read_as<double>(doc, "sigma");
  if (doc.contains("theta_star_norm"))
    config.theta_star_norm = read_as<double>(doc, "theta_star_norm");
  if (doc.contains("delta")) config.delta = read_as<double>(doc, "delta");
  if (doc.contains("t")) config.t = read_as<double>(doc, "t");
  if (doc.contains("trials")) config.trials = read_count(doc, "trials");
  if (doc.contains("master_seed")) config.master_seed = read_seed(doc, "master_seed");
  if (doc.contains("sparse")) {
    const json& sparse = doc["sparse"];
    if (!sparse.is_object()) bad_config("sparse must be an object");
    reject_unknown(sparse, {"n", "tail", "s", "enumeration_cap"}, "sparse section");
    if (sparse.contains("n")) config.sparse_n = read_count(sparse, "n");
    if (sparse.contains("tail")) config.sparse_tail = read_count(sparse, "tail");
    if (sparse.contains("s")) config.sparse_s = read_count(sparse, "s");
    if (sparse.contains("enumeration_cap"))
      config.enumeration_cap = read_seed(sparse, "enumeration_cap");
  }
  config.validate();
  return config;
}

ScenarioParams parse_scenario_params(const std::string& text) {
  const json doc = parse_object(text, "scenario");
  reject_unknown(doc, {"k", "p", "n", "eps", "sigma", "theta_star", "theta_star_norm"},
                 "scenario");
  for (const char* key : {"k", "p", "n", "eps"})
    if (!doc.contains(key)) bad_config(std::string("scenario needs '") + key + "'");
  const std::size_t k = read_count(doc, "k");
  const std::size_t p = read_count(doc, "p");
  const std::size_t n = read_count(doc, "n");
  const double eps = read_as<double>(doc, "eps");
  const double sigma = doc.contains("sigma") ? read_as<double>(doc, "sigma") : 1.0;
  if (doc.contains("theta_star") && doc.contains("theta_star_norm"))
    bad_config("give theta_star or theta_star_norm, not both");
  ScenarioParams params;
  if (doc.contains("theta_star")) {
    params.k = k;
    params.p = p;
    params.n = n;
    params.eps = eps;
    params.sigma = sigma;
    params.theta_star = read_as<Vector>(doc, "theta_star");
  } else {
    const double norm = doc.contains("theta_star_norm") ? read_as<double>(doc, "theta_star_norm")
                                                        : 1.0;
    require(k >= 1 && k <= p, "scenario: need 1 <= k <= p");
    params = ScenarioParams::with_symmetric_head(k, p, n, eps, sigma, norm);
  }
  params.validate();
  return params;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << contents;
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::string format_optional(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

json number_or_null(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json optional_or_null(const std::optional<double>& value) {
  return value ? number_or_null(*value) : json(nullptr);
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "n,p,k,eps,sigma,method,trial_index,seed,excess_risk_total,head_term,tail_term,"
         "support_size,l1_norm,l2_norm,residual,solve_seconds,precondition_flags,status,"
         "mc_risk,mc_std_error\n";
  for (const ResultRow& r : rows) {
    out << r.n << ',' << r.p << ',' << r.k << ',' << format_double(r.eps) << ','
        << format_double(r.sigma) << ',' << to_string(r.method) << ',' << r.trial_index << ','
        << r.seed << ',' << format_double(r.excess_risk_total) << ','
        << format_double(r.head_term) << ',' << format_double(r.tail_term) << ','
        << r.support_size << ',' << format_double(r.l1_norm) << ',' << format_double(r.l2_norm)
        << ',' << format_double(r.residual) << ',' << format_double(r.solve_seconds) << ','
        << r.precondition_flags << ',' << r.status << ',' << format_optional(r.mc_risk) << ','
        << format_optional(r.mc_std_error) << '\n';
  }
}

std::string results_json(std::span<const ResultRow> rows) {
  json out = json::array();
  for (const ResultRow& r : rows) {
    out.push_back({{"n", r.n},
                   {"p", r.p},
                   {"k", r.k},
                   {"eps", r.eps},
                   {"sigma", r.sigma},
                   {"method", std::string(to_string(r.method))},
                   {"trial_index", r.trial_index},
                   {"seed", r.seed},
                   {"excess_risk_total", number_or_null(r.excess_risk_total)},
                   {"head_term", number_or_null(r.head_term)},
                   {"tail_term", number_or_null(r.tail_term)},
                   {"support_size", r.support_size},
                   {"l1_norm", number_or_null(r.l1_norm)},
                   {"l2_norm", number_or_null(r.l2_norm)},
                   {"residual", number_or_null(r.residual)},
                   {"solve_seconds", r.solve_seconds},
                   {"precondition_flags", r.precondition_flags},
                   {"status", r.status},
                   {"mc_risk", optional_or_null(r.mc_risk)},
                   {"mc_std_error", optional_or_null(r.mc_std_error)}});
  }
  return out.dump(2);
}

void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows) {
  out << "n,method,trials,mean_risk,median_risk,q10_risk,q90_risk,mean_support,"
         "ols_curve_value,bp_lower_curve_value,empirical_constant_estimate,fitted_log_slope\n";
  for (const AggregateRow& a : rows) {
    out << a.n << ',' << to_string(a.method) << ',' << a.trials << ','
        << format_double(a.mean_risk) << ',' << format_double(a.median_risk) << ','
        << format_double(a.q10_risk) << ',' << format_double(a.q90_risk) << ','
        << format_double(a.mean_support) << ',' << format_double(a.ols_curve_value) << ','
        << format_double(a.bp_lower_curve_value) << ','
        << format_optional(a.empirical_constant_estimate) << ','
        << format_optional(a.fitted_log_slope) << '\n';
  }
}

std::string aggregates_json(std::span<const AggregateRow> rows) {
  json out = json::array();
  for (const AggregateRow& a : rows) {
    out.push_back({{"n", a.n},
                   {"method", std::string(to_string(a.method))},
                   {"trials", a.trials},
                   {"mean_risk", a.mean_risk},
                   {"median_risk", a.median_risk},
                   {"q10_risk", a.q10_risk},
                   {"q90_risk", a.q90_risk},
                   {"mean_support", a.mean_support},
                   {"ols_curve_value", a.ols_curve_value},
                   {"bp_lower_curve_value", a.bp_lower_curve_value},
                   {"empirical_constant_estimate", optional_or_null(a.empirical_constant_estimate)},
                   {"fitted_log_slope", optional_or_null(a.fitted_log_slope)}});
  }
  return out.dump(2);
}

std::string sweep_metadata_json(const ExperimentConfig& config, const SweepResult& result,
                                const SweepOptions& options, double wall_seconds) {
  std::size_t failed = 0;
  for (const ResultRow& r : result.rows)
    if (!r.ok()) ++failed;
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  json doc;
  doc["artifact"] = "benign-lab";
  doc["version"] = kArtifactVersion;
  doc["timestamp"] = stamp;
  doc["config"] = json::parse(experiment_config_to_json(config));
  doc["rows"] = result.rows.size();
  doc["failed_rows"] = failed;
  doc["warnings"] = result.warnings;
  doc["threads"] = options.threads;
  doc["timing_recorded"] = options.record_timing;
  doc["wall_seconds"] = wall_seconds;
  doc["conventions"] = {
      {"logarithm", "natural"},
      {"ols_curve", "shape only: k/n + eps p/n + n/p with unit constant"},
      {"bp_lower_curve", "c_free sigma^2 n / (s ln^2(3p/s)) with s = n, c_free = 1"},
      {"empirical_constant", "median over rows of R s ln^2(3p/s) / (sigma^2 n), s = support"},
      {"precondition_flags",
       {"sigma >= c1 ||theta*||", "p >= n + k", "n >= ln^2(1/delta) + k^(1+c1)",
        "n <= s <= p - k with s = n"}},
      {"delta", kSweepDelta},
      {"c1", kSweepC1},
      {"zero_tol", config.zero_tol}};
  return doc.dump(2);
}

std::string dataset_json(const Dataset& data, const std::optional<SeedSpec>& seed) {
  json doc;
  doc["kind"] = "benign.dataset";
  doc["version"] = 1;
  doc["dims"] = {{"n", data.x.rows()}, {"p", data.x.cols()}};
  doc["params"] = {{"k", data.params.k},
                   {"p", data.params.p},
                   {"n", data.params.n},
                   {"eps", data.params.eps},
                   {"sigma", data.params.sigma},
                   {"theta_star", data.params.theta_star}};
  if (seed)
    doc["seed"] = {{"master_seed", seed->master_seed},
                   {"stream_label", seed->stream_label},
                   {"index", seed->index}};
  doc["x"] = std::vector<double>(data.x.entries().begin(), data.x.entries().end());
  doc["xi"] = data.xi;
  doc["y"] = data.y;
  return doc.dump();
}

Dataset parse_dataset(const std::string& text) {
  const json doc = parse_object(text, "dataset");
  try {
    if (doc.value("kind", std::string()) != "benign.dataset")
      fail(ErrorCode::Validation, "dataset: kind must be benign.dataset");
    const json& params_doc = doc.at("params");
    Dataset data;
    data.params.k = params_doc.at("k").get<std::size_t>();
    data.params.p = params_doc.at("p").get<std::size_t>();
    data.params.n = params_doc.at("n").get<std::size_t>();
    data.params.eps = params_doc.at("eps").get<double>();
    data.params.sigma = params_doc.at("sigma").get<double>();
    data.params.theta_star = params_doc.at("theta_star").get<Vector>();
    data.params.validate();
    const std::size_t n = doc.at("dims").at("n").get<std::size_t>();
    const std::size_t p = doc.at("dims").at("p").get<std::size_t>();
    require(n == data.params.n && p == data.params.p, "dataset: dims disagree with params");
    data.x = Matrix(n, p, doc.at("x").get<std::vector<double>>());
    data.y = doc.at("y").get<Vector>();
    require(data.y.size() == n, "dataset: y must have n entries");
    if (doc.contains("xi")) {
      data.xi = doc.at("xi").get<Vector>();
      require(data.xi.size() == n, "dataset: xi must have n entries");
    } else {
      data.xi = data.y;
      const Vector signal = multiply(data.x, data.params.theta_star);
      for (std::size_t i = 0; i < n; ++i) data.xi[i] -= signal[i];
    }
    return data;
  } catch (const json::exception& e) {
    fail(ErrorCode::Validation, std::string("dataset: malformed document: ") + e.what());
  }
}

std::string theta_json(std::span<const double> theta, Method method) {
  json doc;
  doc["kind"] = "benign.theta";
  doc["version"] = 1;
  doc["dims"] = {{"length", theta.size()}};
  doc["method"] = std::string(to_string(method));
  doc["theta"] = std::vector<double>(theta.begin(), theta.end());
  return doc.dump();
}

ThetaFile parse_theta(const std::string& text) {
  const json doc = parse_object(text, "theta file");
  try {
    if (doc.value("kind", std::string()) != "benign.theta")
      fail(ErrorCode::Validation, "theta file: kind must be benign.theta");
    ThetaFile file;
    file.theta = doc.at("theta").get<Vector>();
    require(file.theta.size() == doc.at("dims").at("length").get<std::size_t>(),
            "theta file: length disagrees with dims");
    for (double v : file.theta) require(std::isfinite(v), "theta file: entries must be finite");
    if (doc.contains("method")) file.method = parse_method(doc.at("method").get<std::string>());
    return file;
  } catch (const json::exception& e) {
    fail(ErrorCode::Validation, std::string("theta file: malformed document: ") + e.what());
  }
}

std::string interpolant_json(const Interpolant& fit) {
  json doc;
  doc["method"] = std::string(to_string(fit.method));
  doc["p"] = fit.theta_hat.size();
  doc["support_size"] = fit.support.size();
  doc["support"] = fit.support;
  doc["l1_norm"] = fit.l1_norm;
  doc["l2_norm"] = fit.l2_norm;
  doc["residual"] = fit.residual;
  doc["iterations"] = fit.iterations;
  doc["objective"] = fit.objective;
  doc["zero_tol"] = fit.zero_tol;
  return doc.dump(2);
}

void write_interpolant_csv(std::ostream& out, const Interpolant& fit) {
  out << "method,p,support_size,l1_norm,l2_norm,residual,iterations,objective,zero_tol\n"
      << to_string(fit.method) << ',' << fit.theta_hat.size() << ',' << fit.support.size() << ','
      << format_double(fit.l1_norm) << ',' << format_double(fit.l2_norm) << ','
      << format_double(fit.residual) << ',' << fit.iterations << ','
      << format_double(fit.objective) << ',' << format_double(fit.zero_tol) << '\n';
}

void write_risk_csv(std::ostream& out, const RiskReport& report) {
  out << "method,head_term,tail_term,total\n"
      << to_string(report.method) << ',' << format_double(report.head_term) << ','
      << format_double(report.tail_term) << ',' << format_double(report.total) << '\n';
}

std::string error_json(std::string_view category, const std::string& message) {
  return json{{"error", std::string(category)}, {"message", message}}.dump();
}

std::string risk_json(const RiskReport& report, const std::optional<McRiskEstimate>& mc) {
  json doc;
  doc["method"] = std::string(to_string(report.method));
  doc["head_term"] = report.head_term;
  doc["tail_term"] = report.tail_term;
  doc["total"] = report.total;
  if (mc) {
    doc["mc_risk"] = mc->value;
    doc["mc_std_error"] = mc->std_error;
    doc["mc_samples"] = mc->samples;
  }
  return doc.dump(2);
}

std::string concentration_json(std::span<const NamedCheck> checks) {
  json out = json::array();
  for (const NamedCheck& c : checks) {
    json entry;
    entry["name"] = c.name;
    if (c.report) {
      entry["trials"] = c.report->trials;
      entry["threshold"] = number_or_null(c.report->threshold);
      entry["empirical_rate"] = c.report->empirical_rate;
      entry["claimed_rate"] = c.report->claimed_rate;
      entry["mc_half_width"] = c.report->mc_half_width;
      entry["fitted_c"] = optional_or_null(c.report->fitted_c);
      entry["consistent"] = c.report->consistent();
    }
    if (c.error) {
      entry["error"] = std::string(to_string(*c.error));
      entry["message"] = c.message;
    }
    out.push_back(entry);
  }
  return out.dump(2);
}

void write_concentration_csv(std::ostream& out, std::span<const NamedCheck> checks) {
  out << "name,trials,threshold,empirical_rate,claimed_rate,mc_half_width,fitted_c,consistent,"
         "error\n";
  for (const NamedCheck& c : checks) {
    out << c.name << ',';
    if (c.report) {
      out << c.report->trials << ',' << format_double(c.report->threshold) << ','
          << format_double(c.report->empirical_rate) << ','
          << format_double(c.report->claimed_rate) << ','
          << format_double(c.report->mc_half_width) << ','
          << format_optional(c.report->fitted_c) << ','
          << (c.report->consistent() ? "true" : "false") << ',';
    } else {
      out << ",,,,,,false,";
    }
    out << (c.error ? std::string(to_string(*c.error)) : std::string()) << '\n';
  }
}

// ---------------------------------------------------------------------------
// SVG plot
// ---------------------------------------------------------------------------

namespace {

struct Series {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<std::pair<double, double>> points;
};

std::string svg_number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

}  // namespace

std::string risk_plot_svg(std::span<const AggregateRow> rows) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  std::map<std::size_t, std::pair<double, double>> curves;  // n -> (ols, bp)
  for (const AggregateRow& a : rows) {
    const std::string label = "median " + std::string(to_string(a.method));
    if (!index.contains(label)) {
      index[label] = series.size();
      series.push_back({label, kPalette[series.size() % 4], false, {}});
    }
    if (a.median_risk > 0.0) series[index[label]].points.emplace_back(a.n, a.median_risk);
    curves[a.n] = {a.ols_curve_value, a.bp_lower_curve_value};
  }
  Series ols{"OLS shape k/n + eps p/n + n/p", "#555555", true, {}};
  Series bp{"sparse lower curve (c=1)", "#ff7f0e", true, {}};
  for (const auto& [n, values] : curves) {
    if (values.first > 0.0) ols.points.emplace_back(static_cast<double>(n), values.first);
    if (values.second > 0.0) bp.points.emplace_back(static_cast<double>(n), values.second);
  }
  series.push_back(ols);
  series.push_back(bp);

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = -1, ymax = 0;
  if (xmax - xmin < 1e-9) xmin -= 0.5, xmax += 0.5;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax - ymin < 1.0) ymax = ymin + 1.0;

  constexpr double width = 720, height = 480, left = 80, right = 250, top = 30, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (std::log10(x) - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + (ymax - std::log10(y)) / (ymax - ymin) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = ymin; e <= ymax + 1e-9; e += 1.0) {
    const double y = top + (ymax - e) / (ymax - ymin) * plot_h;
    svg << "<line x1=\"" << left << "\" x2=\"" << left + plot_w << "\" y1=\"" << svg_number(y)
        << "\" y2=\"" << svg_number(y) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << svg_number(y + 4)
        << "\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
  }
  for (const auto& [n, values] : curves) {
    const double x = px(static_cast<double>(n));
    svg << "<text x=\"" << svg_number(x) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << n << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">n (log scale)</text>\n";
  svg << "<text transform=\"translate(18," << top + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">excess risk (log scale)</text>\n";

  double legend_y = top + 10;
  for (const Series& s : series) {
    if (s.points.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (const auto& [x, y] : s.points) svg << svg_number(px(x)) << ',' << svg_number(py(y)) << ' ';
    svg << "\"/>\n";
    if (!s.dashed)
      for (const auto& [x, y] : s.points)
        svg << "<circle cx=\"" << svg_number(px(x)) << "\" cy=\"" << svg_number(py(y))
            << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
    svg << "<line x1=\"" << width - right + 15 << "\" x2=\"" << width - right + 45 << "\" y1=\""
        << legend_y << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    svg << "<text x=\"" << width - right + 52 << "\" y=\"" << legend_y + 4 << "\">" << s.label
        << "</text>\n";
    legend_y += 20;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace benign::io
