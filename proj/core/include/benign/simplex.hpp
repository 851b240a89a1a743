#pragma once

#include <cstddef>
#include <string_view>

#include "benign/numerics.hpp"

namespace benign {

enum class PivotRule {
  /// Lowest-index entering column with negative reduced cost; ratio-test
  /// ties go to the lowest-index basic variable.
  Bland,
  /// Most negative reduced cost, falling back to Bland's rule after a run of
  /// degenerate pivots and returning to Dantzig after the next
  /// nondegenerate one.
  DantzigWithBlandFallback,
};

std::string_view to_string(PivotRule rule);
PivotRule parse_pivot_rule(std::string_view text);

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-9;
  PivotRule rule = PivotRule::DantzigWithBlandFallback;
  int max_iterations = 100000;
  int degenerate_run_before_bland = 50;
};

/// min cᵀx subject to A x = b, x >= 0.
struct StandardFormLp {
  Matrix a;
  Vector b;
  Vector c;
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
  /// Column index of the basic variable of each row, restricted to original
  /// columns (rows whose artificial stays basic are omitted).
  IndexSet basis;
  int phase_one_iterations = 0;
  int phase_two_iterations = 0;
  int iterations() const { return phase_one_iterations + phase_two_iterations; }
};

/// Two-phase dense-tableau primal simplex. Returns a basic feasible optimal
/// solution, so at most rows(A) entries of x are nonzero. The basic values
/// are recomputed from the original columns at exit.
///
/// Throws NotInterpolable when phase one ends with positive infeasibility,
/// IterationLimit when max_iterations pivots are exceeded and Validation on
/// shape errors. An unbounded phase two raises DomainError.
LpSolution solve_simplex(const StandardFormLp& lp, const SimplexOptions& options = {});

}  // namespace benign
