#include "benign/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "benign/error.hpp"

namespace benign {

std::string_view to_string(PivotRule rule) {
  switch (rule) {
    case PivotRule::Bland: return "bland";
    case PivotRule::DantzigWithBlandFallback: return "dantzig-bland";
  }
  return "unknown";
}

PivotRule parse_pivot_rule(std::string_view text) {
  if (text == "bland") return PivotRule::Bland;
  if (text == "dantzig-bland") return PivotRule::DantzigWithBlandFallback;
  fail(ErrorCode::Validation, "unknown pivot rule '" + std::string(text) + "'");
}

namespace {

class Tableau {
 public:
  Tableau(const StandardFormLp& lp, const SimplexOptions& options)
      : m_(lp.a.rows()),
        n_(lp.a.cols()),
        width_(n_ + m_ + 1),
        cells_((m_ + 1) * width_, 0.0),
        basis_(m_),
        options_(options) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
      auto src = lp.a.row(i);
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * src[j];
      at(i, n_ + i) = 1.0;
      at(i, rhs()) = sign * lp.b[i];
      basis_[i] = n_ + i;
    }
  }

  std::size_t rhs() const { return width_ - 1; }
  double& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }
  const IndexSet& basis() const { return basis_; }
  bool is_artificial(std::size_t column) const { return column >= n_; }

  // Objective row m_: reduced costs d_j = c_j - c_Bᵀ B⁻¹ A_j and -z in rhs.
  void load_costs(std::span<const double> costs_original, bool phase_one) {
    auto cost = [&](std::size_t j) {
      if (j < n_) return phase_one ? 0.0 : costs_original[j];
      return phase_one ? 1.0 : 0.0;
    };
    for (std::size_t j = 0; j < width_; ++j) at(m_, j) = j < n_ + m_ ? cost(j) : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost(basis_[i]);
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(m_, j) -= cb * at(i, j);
    }
  }

  double objective() const { return -at(m_, rhs()); }

  void pivot(std::size_t row, std::size_t col) {
    const double inv = 1.0 / at(row, col);
    double* pr = &cells_[row * width_];
    for (std::size_t j = 0; j < width_; ++j) pr[j] *= inv;
    pr[col] = 1.0;
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j)
      if (pr[j] != 0.0) nonzero_.push_back(j);
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == row) continue;
      double* pi = &cells_[i * width_];
      const double f = pi[col];
      if (f == 0.0) continue;
      for (std::size_t j : nonzero_) pi[j] -= f * pr[j];
      pi[col] = 0.0;
    }
    basis_[row] = col;
  }

  // Runs primal simplex iterations on the loaded objective. Returns the number
  // of pivots performed.
  int optimize(int budget) {
    int iterations = 0;
    int degenerate_run = 0;
    bool bland = options_.rule == PivotRule::Bland;
    for (;;) {
      const std::size_t entering = choose_entering(bland);
      if (entering == kNone) return iterations;
      const std::size_t leaving = choose_leaving(entering);
      if (leaving == kNone) fail(ErrorCode::DomainError, "linear program is unbounded");
      if (iterations >= budget)
        fail(ErrorCode::IterationLimit, "simplex exceeded its iteration limit");
      const bool degenerate = at(leaving, rhs()) <= options_.feas_tol;
      pivot(leaving, entering);
      ++iterations;
      if (options_.rule == PivotRule::DantzigWithBlandFallback) {
        degenerate_run = degenerate ? degenerate_run + 1 : 0;
        bland = degenerate_run >= options_.degenerate_run_before_bland;
      }
    }
  }

  // Pivots remaining artificial variables out of the basis where an original
  // column can replace them. Rows where none can are linearly redundant.
  void evict_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      std::size_t best = kNone;
      double best_abs = options_.pivot_tol;
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = std::abs(at(i, j));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best != kNone) pivot(i, best);
    }
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

 private:
  std::size_t choose_entering(bool bland) const {
    std::size_t best = kNone;
    double best_value = -options_.opt_tol;
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = at(m_, j);
      if (d < best_value) {
        best = j;
        if (bland) break;
        best_value = d;
      }
    }
    return best;
  }

  std::size_t choose_leaving(std::size_t col) const {
    std::size_t best = kNone;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = at(i, col);
      if (a <= options_.pivot_tol) continue;
      const double ratio = std::max(at(i, rhs()), 0.0) / a;
      if (best == kNone) {
        best = i;
        best_ratio = ratio;
        continue;
      }
      const double tie = 1e-12 * std::max(1.0, best_ratio);
      if (ratio < best_ratio - tie || (ratio <= best_ratio + tie && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> cells_;
  IndexSet basis_;
  std::vector<std::size_t> nonzero_;
  SimplexOptions options_;
};

}  // namespace

LpSolution solve_simplex(const StandardFormLp& lp, const SimplexOptions& options) {
  const std::size_t m = lp.a.rows();
  const std::size_t n = lp.a.cols();
  require(lp.b.size() == m, "LP: b length must equal the row count");
  require(lp.c.size() == n, "LP: c length must equal the column count");
  require(options.feas_tol > 0 && options.opt_tol > 0 && options.pivot_tol > 0,
          "LP tolerances must be positive");
  for (double v : lp.b) require(std::isfinite(v), "LP right-hand side must be finite");

  Tableau tableau(lp, options);
  LpSolution solution;

  tableau.load_costs(lp.c, true);
  solution.phase_one_iterations = tableau.optimize(options.max_iterations);
  const double infeasibility = tableau.objective();
  if (infeasibility > options.feas_tol * std::max(1.0, norm1(lp.b)))
    fail(ErrorCode::NotInterpolable, "equality constraints are infeasible");
  tableau.evict_artificials();

  tableau.load_costs(lp.c, false);
  solution.phase_two_iterations =
      tableau.optimize(options.max_iterations - solution.phase_one_iterations);

  solution.x.assign(n, 0.0);
  IndexSet rows;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t col = tableau.basis()[i];
    if (tableau.is_artificial(col)) continue;
    solution.basis.push_back(col);
    rows.push_back(i);
    solution.x[col] = std::max(tableau.at(i, tableau.rhs()), 0.0);
  }

  // Recompute basic values from the original columns; a tableau that has
  // absorbed many pivots carries roundoff the direct solve does not.
  if (!solution.basis.empty()) {
    const Matrix basis_columns = lp.a.select_columns(solution.basis);
    try {
      const Vector polished = least_squares(basis_columns, lp.b);
      const double floor = -options.feas_tol * std::max(1.0, norm_inf(lp.b));
      if (std::all_of(polished.begin(), polished.end(), [&](double v) { return v >= floor; })) {
        for (std::size_t r = 0; r < polished.size(); ++r)
          solution.x[solution.basis[r]] = std::max(polished[r], 0.0);
      }
    } catch (const Error&) {
      // Keep the tableau values.
    }
  }
  solution.objective = dot(lp.c, solution.x);
  return solution;
}

}  // namespace benign
