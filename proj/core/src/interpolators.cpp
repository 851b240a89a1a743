#include "benign/interpolators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "benign/error.hpp"

namespace benign {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::MinL2: return "MIN_L2";
    case Method::MinL1: return "MIN_L1";
    case Method::Sparsified: return "SPARSIFIED";
    case Method::External: return "EXTERNAL";
  }
  return "UNKNOWN";
}

Method parse_method(std::string_view text) {
  if (text == "MIN_L2" || text == "min_l2") return Method::MinL2;
  if (text == "MIN_L1" || text == "min_l1") return Method::MinL1;
  if (text == "SPARSIFIED" || text == "sparsified") return Method::Sparsified;
  if (text == "EXTERNAL" || text == "external") return Method::External;
  fail(ErrorCode::Validation, "unknown method '" + std::string(text) + "'");
}

void LpOptions::validate() const {
  require(zero_tol > 0.0 && feas_tol > 0.0, "LP tolerances must be strictly positive");
  require(max_iterations > 0, "LP iteration limit must be positive");
}

double interpolation_tolerance(std::span<const double> y) {
  return 1e-8 * std::max(1.0, norm2(y));
}

IndexSet support(std::span<const double> theta, double zero_tol) {
  require(zero_tol > 0.0, "support: zero tolerance must be positive");
  const double threshold = zero_tol * std::max(1.0, norm_inf(theta));
  IndexSet out;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (std::abs(theta[i]) > threshold) out.push_back(i);
  return out;
}

namespace {

double residual_norm(const Matrix& x, std::span<const double> theta, std::span<const double> y) {
  Vector r = multiply(x, theta);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return norm2(r);
}

void check_shapes(const Matrix& x, std::span<const double> y) {
  require(!x.empty(), "design matrix must be nonempty");
  require(y.size() == x.rows(), "response length must equal the number of rows of X");
}

}  // namespace

Interpolant describe(const Matrix& x, std::span<const double> y, Vector theta, Method method,
                     double zero_tol) {
  require(theta.size() == x.cols(), "theta length must equal the number of columns of X");
  Interpolant out;
  out.method = method;
  out.zero_tol = zero_tol;
  out.support = support(theta, zero_tol);
  out.l1_norm = norm1(theta);
  out.l2_norm = norm2(theta);
  out.residual = residual_norm(x, theta, y);
  out.objective = out.l1_norm;
  out.theta_hat = std::move(theta);
  return out;
}

Interpolant min_l2(const Matrix& x, std::span<const double> y) {
  check_shapes(x, y);
  Vector theta;
  if (x.cols() >= x.rows()) {
    try {
      theta = multiply_transposed(x, gram_solve(x, y));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      theta = min_norm_solve(x, y, kGramRankTolerance);
    }
  } else {
    try {
      theta = least_squares(x, y);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      fail(ErrorCode::NotInterpolable, "X has fewer columns than rows and is rank deficient");
    }
  }
  Interpolant out = describe(x, y, std::move(theta), Method::MinL2);
  out.objective = out.l2_norm;
  if (out.residual > interpolation_tolerance(y))
    fail(ErrorCode::NotInterpolable, "y is not in the column space of X");
  return out;
}

Interpolant min_l1(const Matrix& x, std::span<const double> y, const LpOptions& options) {
  check_shapes(x, y);
  options.validate();
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();

  StandardFormLp lp;
  std::vector<double> entries(n * 2 * p);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < p; ++j) {
      entries[i * 2 * p + j] = row[j];
      entries[i * 2 * p + p + j] = -row[j];
    }
  }
  lp.a = Matrix(n, 2 * p, std::move(entries));
  lp.b.assign(y.begin(), y.end());
  lp.c.assign(2 * p, 1.0);

  SimplexOptions simplex;
  simplex.feas_tol = options.feas_tol;
  simplex.rule = options.pivot_rule;
  simplex.max_iterations = options.max_iterations;
  const LpSolution solution = solve_simplex(lp, simplex);

  Vector theta(p);
  for (std::size_t j = 0; j < p; ++j) theta[j] = solution.x[j] - solution.x[p + j];
  Interpolant out = describe(x, y, std::move(theta), Method::MinL1, options.zero_tol);
  out.iterations = solution.iterations();
  out.objective = solution.objective;
  if (out.residual > interpolation_tolerance(y))
    fail(ErrorCode::NotInterpolable, "basis pursuit solution misses the interpolation tolerance");
  return out;
}

Interpolant sparsify(const Matrix& x, std::span<const double> theta_in,
                     const LpOptions& options) {
  require(theta_in.size() == x.cols(), "theta length must equal the number of columns of X");
  require(!x.empty(), "design matrix must be nonempty");
  options.validate();
  const std::size_t n = x.rows();
  const Vector y = multiply(x, theta_in);

  Vector theta(theta_in.begin(), theta_in.end());
  IndexSet active = support(theta, options.zero_tol);
  {
    std::vector<bool> keep(theta.size(), false);
    for (std::size_t i : active) keep[i] = true;
    for (std::size_t i = 0; i < theta.size(); ++i)
      if (!keep[i]) theta[i] = 0.0;
  }

  int passes = 0;
  while (active.size() > n) {
    if (passes > static_cast<int>(x.cols()))
      fail(ErrorCode::NumericalBreakdown, "support reduction failed to terminate");
    const IndexSet chosen(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(n + 1));
    const Matrix columns = x.select_columns(chosen);
    Vector lambda = null_vector(columns);

    const double dependence = norm2(multiply(columns, lambda));
    if (!(dependence <= 1e-10 * std::max(columns.max_column_norm(),
                                         std::numeric_limits<double>::min())))
      fail(ErrorCode::NumericalBreakdown, "null-space direction is not numerically dependent");

    double drift = 0.0;  // sum of lambda_i sign(theta_i)
    for (std::size_t a = 0; a < chosen.size(); ++a)
      drift += lambda[a] * (theta[chosen[a]] > 0.0 ? 1.0 : -1.0);
    // Moving along -lambda decreases the l1 norm when drift > 0; for
    // drift < 0 the roles flip. With zero drift the norm is flat along the
    // line up to the first zero crossing.
    if (drift < -1e-12 * norm1(lambda))
      for (double& l : lambda) l = -l;

    std::size_t hit = chosen.size();
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < chosen.size(); ++a) {
      if (lambda[a] == 0.0) continue;
      const double ratio = theta[chosen[a]] / lambda[a];
      if (ratio > 0.0 && ratio < step) {
        step = ratio;
        hit = a;
      }
    }
    if (hit == chosen.size())
      fail(ErrorCode::NumericalBreakdown, "no sign-compatible step along the null direction");

    for (std::size_t a = 0; a < chosen.size(); ++a) theta[chosen[a]] -= step * lambda[a];
    theta[chosen[hit]] = 0.0;

    const double threshold = options.zero_tol * std::max(1.0, norm_inf(theta));
    IndexSet next;
    for (std::size_t i : active) {
      if (std::abs(theta[i]) > threshold)
        next.push_back(i);
      else
        theta[i] = 0.0;
    }
    active = std::move(next);
    ++passes;
  }

  if (passes > 0 && !active.empty()) {
    // Once the support columns are independent the values on them are
    // determined by y; re-solving removes roundoff accumulated by the steps.
    try {
      const Vector values = least_squares(x.select_columns(active), y);
      Vector candidate(theta.size(), 0.0);
      for (std::size_t a = 0; a < active.size(); ++a) candidate[active[a]] = values[a];
      if (residual_norm(x, candidate, y) <= residual_norm(x, theta, y) &&
          norm1(candidate) <= norm1(theta) + options.feas_tol)
        theta = std::move(candidate);
    } catch (const Error&) {
      // Dependent support columns: keep the stepped values.
    }
  }

  Interpolant out = describe(x, y, std::move(theta), Method::Sparsified, options.zero_tol);
  out.iterations = passes;
  if (out.residual > interpolation_tolerance(y))
    fail(ErrorCode::NumericalBreakdown, "support reduction lost interpolation accuracy");
  return out;
}

}  // namespace benign
