#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "benign/harness.hpp"
#include "benign/scenario.hpp"

namespace benign::io {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Config documents are JSON objects; unknown keys are rejected.
ExperimentConfig parse_experiment_config(const std::string& text);
ConcentrationConfig parse_concentration_config(const std::string& text);
/// Scenario document: k, p, n, eps, sigma and either theta_star (full
/// vector) or theta_star_norm (spread evenly over the head).
ScenarioParams parse_scenario_params(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& config);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Doubles are printed with 17 significant digits; absent or NaN values are
/// empty fields.
std::string format_double(double value);

/// Header plus one line per row; columns follow the ResultRow field order.
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
std::string results_json(std::span<const ResultRow> rows);
void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows);
std::string aggregates_json(std::span<const AggregateRow> rows);

/// Sidecar document describing a sweep: config echo, version, UTC timestamp,
/// warnings and conventions used by the theory curves.
std::string sweep_metadata_json(const ExperimentConfig& config, const SweepResult& result,
                                const SweepOptions& options, double wall_seconds);

/// Self-describing dataset document: kind, dims, params, row-major X, xi, y.
std::string dataset_json(const Dataset& data, const std::optional<SeedSpec>& seed = {});
Dataset parse_dataset(const std::string& text);

std::string theta_json(std::span<const double> theta, Method method);
struct ThetaFile {
  Vector theta;
  Method method = Method::External;
};
ThetaFile parse_theta(const std::string& text);

std::string interpolant_json(const Interpolant& fit);
void write_interpolant_csv(std::ostream& out, const Interpolant& fit);
std::string risk_json(const RiskReport& report,
                      const std::optional<McRiskEstimate>& mc = std::nullopt);
void write_risk_csv(std::ostream& out, const RiskReport& report);
/// {"error": <category>, "message": ...} on one line.
std::string error_json(std::string_view category, const std::string& message);
std::string concentration_json(std::span<const NamedCheck> checks);
void write_concentration_csv(std::ostream& out, std::span<const NamedCheck> checks);

/// Log-log SVG of median risk against n, one series per method, with the OLS
/// shape curve and the sparse lower curve overlaid.
std::string risk_plot_svg(std::span<const AggregateRow> rows);

}  // namespace benign::io
