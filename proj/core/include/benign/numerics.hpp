#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace benign {

using Vector = std::vector<double>;
using IndexSet = std::vector<std::size_t>;

/// Dense real matrix stored row-major. Entries supplied at construction must
/// be finite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }

  std::span<const double> entries() const noexcept { return entries_; }

  Matrix transpose() const;
  Matrix select_columns(std::span<const std::size_t> columns) const;
  Matrix scaled(double factor) const;

  double frobenius_norm() const;
  /// Largest Euclidean norm over columns.
  double max_column_norm() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Small vector helpers used throughout the library.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);

/// M v
Vector multiply(const Matrix& m, std::span<const double> v);
/// Mᵀ w
Vector multiply_transposed(const Matrix& m, std::span<const double> w);
/// M Mᵀ
Matrix row_gram(const Matrix& m);
/// Mᵀ M
Matrix column_gram(const Matrix& m);

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Identifies one random stream: a pure function of the three fields.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::string stream_label;
  std::uint64_t index = 0;
};

/// 64-bit seed derived from a SeedSpec by SplitMix64 finalisation of the
/// master seed, the FNV-1a hash of the label and the index.
std::uint64_t derive_seed(const SeedSpec& spec);

/// xoshiro256** generator seeded through SplitMix64. Normal variates use the
/// Box-Muller transform on pairs of uniforms; every call to normal() consumes
/// exactly one half of a pair, so the consumption pattern never depends on
/// the values drawn.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

RandomStream derive_stream(const SeedSpec& spec);

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

inline constexpr double kGramRankTolerance = 1e-10;

/// Solves X Xᵀ a = y by Cholesky factorisation. Throws RankDeficient when a
/// pivot falls below rel_tol times the largest diagonal of X Xᵀ, or when the
/// relative residual stays above 1e-8 after one refinement step.
Vector gram_solve(const Matrix& x, std::span<const double> y,
                  double rel_tol = kGramRankTolerance);

struct PowerIterationOptions {
  double rel_tol = 1e-12;
  int max_iterations = 100000;
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix given as a
/// dense row-major dim x dim array. Power iteration from the normalised
/// all-ones vector; when the result is below the largest diagonal entry (a
/// certificate that the start vector missed the top eigenvector) one restart
/// from a fixed pseudorandom vector is made. The result is clamped to
/// [max diagonal, trace]. Throws NoConvergence on hitting the iteration cap.
double top_eigenvalue_psd(std::span<const double> gram, std::size_t dim,
                          const PowerIterationOptions& options = {});

/// Largest singular value, by matrix-free power iteration on MᵀM.
double op_norm(const Matrix& m, const PowerIterationOptions& options = {});
double op_norm(const Matrix& m, double rel_tol);

/// Householder QR of a matrix with rows >= cols, optionally with column
/// pivoting.
class HouseholderQr {
 public:
  HouseholderQr(Matrix a, bool column_pivoting);

  std::size_t rows() const noexcept { return packed_.rows(); }
  std::size_t cols() const noexcept { return packed_.cols(); }

  /// Number of diagonal entries of R with |r_jj| > rel_tol * |r_00|.
  std::size_t rank(double rel_tol) const;
  double r(std::size_t i, std::size_t j) const { return packed_(i, j); }
  /// Column permutation: R's column j is the input's column permutation()[j].
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

  /// Q v (v has `rows()` entries).
  Vector apply_q(Vector v) const;
  /// Qᵀ v
  Vector apply_qt(Vector v) const;

 private:
  Matrix packed_;  // R in the upper triangle, reflector tails below
  Vector beta_;
  std::vector<std::size_t> permutation_;
};

/// Unit vector λ with A λ = 0 for a wide matrix A (cols > rows), taken as the
/// last column of Q in the QR factorisation of Aᵀ. The first nonzero entry of
/// the result is positive.
Vector null_vector(const Matrix& wide);

/// Minimum-norm solution of X θ = y via pivoted QR of Xᵀ; columns of Xᵀ whose
/// pivot falls below rel_tol relative to the largest are treated as
/// dependent. The caller checks the residual.
Vector min_norm_solve(const Matrix& x, std::span<const double> y, double rel_tol);

/// Least-squares solution of A z = b for rows(A) >= cols(A) by Householder
/// QR. Throws RankDeficient if A lacks full column rank numerically.
Vector least_squares(const Matrix& a, std::span<const double> rhs);

/// Solves the square system B z = b; same failure mode as least_squares.
Vector solve_square(const Matrix& b, std::span<const double> rhs);

}  // namespace benign
