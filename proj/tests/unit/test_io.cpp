#include <cmath>
#include <sstream>

#include "doctest.h"

#include "benign/error.hpp"
#include "benign/io.hpp"

using namespace benign;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("experiment config parsing") {
  const auto config = io::parse_experiment_config(R"({
    "regime": "SQUARE_LAW", "n_values": [16, 32], "k": 5,
    "eps_rule": "1/n^2", "p_rule": "n^2", "methods": ["MIN_L2", "min_l1"],
    "trials": 4, "master_seed": "18446744073709551615"
  })");
  CHECK(config.regime == Regime::SquareLaw);
  CHECK(config.n_values == std::vector<std::size_t>{16, 32});
  CHECK_FALSE(config.eps.has_value());
  CHECK_FALSE(config.p.has_value());
  CHECK(config.methods == std::vector<Method>{Method::MinL2, Method::MinL1});
  CHECK(config.master_seed == UINT64_MAX);

  const auto echoed = io::parse_experiment_config(io::experiment_config_to_json(config));
  CHECK(echoed.n_values == config.n_values);
  CHECK(echoed.master_seed == config.master_seed);
  CHECK(echoed.regime == config.regime);

  const auto explicit_config =
      io::parse_experiment_config(R"({"n_values": [8], "eps_rule": 0.25, "p_rule": 30})");
  CHECK(explicit_config.regime == Regime::Explicit);
  CHECK(*explicit_config.eps == 0.25);
  CHECK(*explicit_config.p == 30);
}

TEST_CASE("experiment config rejections") {
  CHECK(code_of([] { io::parse_experiment_config(R"({"n_values": [8], "colour": 1})"); }) ==
        ErrorCode::Validation);
  CHECK(code_of([] { io::parse_experiment_config(R"({"n_values": [8], "trials": -1})"); }) ==
        ErrorCode::Validation);
  CHECK(code_of([] { io::parse_experiment_config("{not json"); }) == ErrorCode::Validation);
  CHECK(code_of([] {
          io::parse_experiment_config(R"({"regime": "SQUARE_LAW", "n_values": [8], "p_rule": 9})");
        }) == ErrorCode::Validation);
  CHECK(code_of([] { io::parse_experiment_config(R"({"n_values": [8], "methods": ["SPARSIFIED"]})"); }) ==
        ErrorCode::Validation);
}

TEST_CASE("concentration config parsing") {
  const auto config = io::parse_concentration_config(
      R"({"n": 50, "trials": 100, "sparse": {"tail": 10, "s": 2}})");
  CHECK(config.n == 50);
  CHECK(config.trials == 100);
  CHECK(config.sparse_tail == 10);
  CHECK(config.sparse_s == 2);
  CHECK(code_of([] { io::parse_concentration_config(R"({"sparse": {"width": 3}})"); }) ==
        ErrorCode::Validation);
}

TEST_CASE("doubles keep 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(NAN).empty());
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("results CSV header and rows") {
  ResultRow row;
  row.n = 4;
  row.p = 16;
  row.k = 1;
  row.eps = 0.0625;
  row.sigma = 1.0;
  row.method = Method::MinL1;
  row.excess_risk_total = 0.5;
  row.precondition_flags = "1010";
  const std::vector<ResultRow> rows{row};
  std::ostringstream out;
  io::write_results_csv(out, rows);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header ==
        "n,p,k,eps,sigma,method,trial_index,seed,excess_risk_total,head_term,tail_term,"
        "support_size,l1_norm,l2_norm,residual,solve_seconds,precondition_flags,status,"
        "mc_risk,mc_std_error");
  CHECK(line.rfind("4,16,1,0.0625,1,MIN_L1,0,0,0.5,", 0) == 0);
  CHECK(line.find(",1010,ok,,") != std::string::npos);
}

TEST_CASE("dataset documents round-trip") {
  const auto params = ScenarioParams::with_symmetric_head(2, 7, 3, 0.3, 0.5, 1.0);
  const Dataset data = generate(params, {5, "trial", 1});
  const Dataset back = io::parse_dataset(io::dataset_json(data, SeedSpec{5, "trial", 1}));
  CHECK(back.x == data.x);
  CHECK(back.y == data.y);
  CHECK(back.xi == data.xi);
  CHECK(back.params.theta_star == data.params.theta_star);
  CHECK(back.params.eps == data.params.eps);
  CHECK(code_of([] { io::parse_dataset(R"({"kind": "benign.theta"})"); }) ==
        ErrorCode::Validation);
}

TEST_CASE("theta documents round-trip") {
  const Vector theta{0.1, -2.0, 0.0};
  const auto file = io::parse_theta(io::theta_json(theta, Method::MinL1));
  CHECK(file.theta == theta);
  CHECK(file.method == Method::MinL1);
}

TEST_CASE("risk plot is an SVG with one series per method") {
  std::vector<AggregateRow> rows;
  for (std::size_t n : {16u, 32u, 64u})
    for (Method m : {Method::MinL2, Method::MinL1}) {
      AggregateRow r;
      r.n = n;
      r.method = m;
      r.median_risk = m == Method::MinL2 ? 1.0 / n : 0.3;
      r.ols_curve_value = 0.5;
      r.bp_lower_curve_value = 0.05;
      rows.push_back(r);
    }
  const std::string svg = io::risk_plot_svg(rows);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("MIN_L1") != std::string::npos);
  CHECK(svg.find("MIN_L2") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("missing files raise Io") {
  CHECK(code_of([] { io::read_file("/nonexistent/benign/file.json"); }) == ErrorCode::Io);
}
