#pragma once

#include <string_view>

#include "benign/numerics.hpp"
#include "benign/simplex.hpp"

namespace benign {

enum class Method { MinL2, MinL1, Sparsified, External };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

inline constexpr double kDefaultZeroTol = 1e-9;

struct LpOptions {
  double zero_tol = kDefaultZeroTol;
  double feas_tol = 1e-9;
  PivotRule pivot_rule = PivotRule::DantzigWithBlandFallback;
  int max_iterations = 100000;

  void validate() const;
};

/// A fitted parameter vector together with what the caller usually wants to
/// know about it.
struct Interpolant {
  Vector theta_hat;
  Method method = Method::External;
  IndexSet support;
  double l1_norm = 0.0;
  double l2_norm = 0.0;
  /// ||X theta_hat - y||_2
  double residual = 0.0;
  int iterations = 0;
  double objective = 0.0;
  double zero_tol = kDefaultZeroTol;
};

/// Interpolation tolerance used by every routine here:
/// 1e-8 * max(1, ||y||_2).
double interpolation_tolerance(std::span<const double> y);

/// {i : |theta_i| > zero_tol * max(1, ||theta||_inf)}
IndexSet support(std::span<const double> theta, double zero_tol);

/// Fills in support, norms and residual for an arbitrary theta.
Interpolant describe(const Matrix& x, std::span<const double> y, Vector theta, Method method,
                     double zero_tol = kDefaultZeroTol);

/// theta = Xᵀ (X Xᵀ)⁻¹ y. Falls back to a pivoted-QR minimum-norm solve when
/// X Xᵀ is numerically singular; throws NotInterpolable if y is not in the
/// range of X.
Interpolant min_l2(const Matrix& x, std::span<const double> y);

/// Basis pursuit: min ||theta||_1 s.t. X theta = y, solved as the linear
/// program min sum(u + v) s.t. X(u - v) = y, u, v >= 0. The simplex returns
/// a vertex, so the support has at most n elements.
Interpolant min_l1(const Matrix& x, std::span<const double> y, const LpOptions& options = {});

/// Support reduction: repeatedly takes a null-space direction of n + 1
/// support columns and moves along it until a coordinate hits zero, in the
/// direction that does not increase the l1 norm. Stops once the support has
/// at most n elements. Throws NumericalBreakdown if a null-space direction
/// cannot be certified.
Interpolant sparsify(const Matrix& x, std::span<const double> theta,
                     const LpOptions& options = {});

}  // namespace benign
