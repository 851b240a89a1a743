#include "benign/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "benign/error.hpp"

namespace benign {

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(entries_.size() == rows_ * cols_, "matrix entry count does not match its shape");
  for (double e : entries_) require(std::isfinite(e), "matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix out(rows_, columns.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t c = 0; c < columns.size(); ++c) out(i, c) = (*this)(i, columns[c]);
  return out;
}

Matrix Matrix::scaled(double factor) const {
  Matrix out = *this;
  for (double& e : out.entries_) e *= factor;
  return out;
}

double Matrix::frobenius_norm() const { return norm2(entries_); }

// Uses the same scaled accumulation as frobenius_norm so that a single-column
// matrix gives bit-identical values for both.
double Matrix::max_column_norm() const {
  Vector column(rows_);
  double best = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    for (std::size_t i = 0; i < rows_; ++i) column[i] = (*this)(i, j);
    best = std::max(best, norm2(column));
  }
  return best;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation keeps tiny and huge vectors from under/overflowing.
  double scale = norm_inf(v);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) {
    double r = x / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

Vector multiply(const Matrix& m, std::span<const double> v) {
  Vector out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), v);
  return out;
}

Vector multiply_transposed(const Matrix& m, std::span<const double> w) {
  Vector out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double wi = w[i];
    if (wi == 0.0) continue;
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += wi * r[j];
  }
  return out;
}

Matrix row_gram(const Matrix& m) {
  Matrix g(m.rows(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = dot(m.row(i), m.row(j));
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

Matrix column_gram(const Matrix& m) {
  Matrix g(m.cols(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const double ri = row[i];
      if (ri == 0.0) continue;
      for (std::size_t j = 0; j <= i; ++j) g(i, j) += ri * row[j];
    }
  }
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t j = 0; j < i; ++j) g(j, i) = g(i, j);
  return g;
}

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t derive_seed(const SeedSpec& spec) {
  std::uint64_t x = splitmix_finalize(spec.master_seed + kGolden);
  x = splitmix_finalize(x ^ fnv1a(spec.stream_label));
  x = splitmix_finalize(x + kGolden * (spec.index + 1));
  return x;
}

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    s += kGolden;
    word = splitmix_finalize(s);
  }
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection of the biased low zone.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

RandomStream derive_stream(const SeedSpec& spec) { return RandomStream(derive_seed(spec)); }

// ---------------------------------------------------------------------------
// Gram solve
// ---------------------------------------------------------------------------

namespace {

// In-place Cholesky of a symmetric positive definite matrix; lower triangle
// holds L afterwards.
void cholesky(Matrix& g, double rel_tol) {
  const std::size_t n = g.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
  if (n > 0 && !(max_diag > 0.0)) fail(ErrorCode::RankDeficient, "Gram matrix is zero");
  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= g(j, k) * g(j, k);
    if (!(d > rel_tol * max_diag)) {
      fail(ErrorCode::RankDeficient,
           "Gram pivot " + std::to_string(j) + " below rank tolerance");
    }
    const double ljj = std::sqrt(d);
    g(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= g(i, k) * g(j, k);
      g(i, j) = s / ljj;
    }
  }
}

Vector cholesky_solve(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  Vector z(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) z[i] -= l(i, k) * z[k];
    z[i] /= l(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n; ++k) z[ii] -= l(k, ii) * z[k];
    z[ii] /= l(ii, ii);
  }
  return z;
}

Vector symmetric_residual(const Matrix& g, std::span<const double> a,
                          std::span<const double> y) {
  Vector r(y.begin(), y.end());
  for (std::size_t i = 0; i < g.rows(); ++i) r[i] -= dot(g.row(i), a);
  return r;
}

}  // namespace

Vector gram_solve(const Matrix& x, std::span<const double> y, double rel_tol) {
  require(y.size() == x.rows(), "gram_solve: y length must equal the row count");
  require(x.cols() >= x.rows(), "gram_solve: needs at least as many columns as rows");
  const Matrix gram = row_gram(x);
  Matrix factor = gram;
  cholesky(factor, rel_tol);

  Vector a = cholesky_solve(factor, y);
  const double ynorm = norm2(y);
  Vector r = symmetric_residual(gram, a, y);
  if (norm2(r) > 1e-8 * ynorm) {
    const Vector correction = cholesky_solve(factor, r);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += correction[i];
    r = symmetric_residual(gram, a, y);
    if (norm2(r) > 1e-8 * ynorm)
      fail(ErrorCode::RankDeficient, "Gram system too ill-conditioned for the residual target");
  }
  return a;
}

// ---------------------------------------------------------------------------
// Power iteration
// ---------------------------------------------------------------------------

namespace {

template <typename Apply>
double power_iterate(Apply&& apply, Vector v, const PowerIterationOptions& options) {
  double nv = norm2(v);
  for (double& e : v) e /= nv;
  double previous = -1.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    Vector w = apply(v);
    const double rho = dot(v, w);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    if (previous >= 0.0 && std::abs(rho - previous) <= options.rel_tol * rho) return rho;
    previous = rho;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
  }
  fail(ErrorCode::NoConvergence, "power iteration hit its iteration cap");
}

template <typename Apply>
double top_eigenvalue(Apply&& apply, std::size_t dim, double max_diag, double trace,
                      const PowerIterationOptions& options) {
  if (dim == 0 || trace == 0.0) return 0.0;
  double rho = power_iterate(apply, Vector(dim, 1.0), options);
  if (rho < max_diag) {
    // The ones vector missed the dominant direction; restart once.
    RandomStream stream(0x243F6A8885A308D3ULL);
    Vector start(dim);
    for (double& e : start) e = stream.normal();
    rho = std::max(rho, power_iterate(apply, std::move(start), options));
  }
  return std::clamp(rho, max_diag, trace);
}

}  // namespace

double top_eigenvalue_psd(std::span<const double> gram, std::size_t dim,
                          const PowerIterationOptions& options) {
  require(gram.size() == dim * dim, "top_eigenvalue_psd: shape mismatch");
  double max_diag = 0.0;
  double trace = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    max_diag = std::max(max_diag, gram[i * dim + i]);
    trace += gram[i * dim + i];
  }
  auto apply = [&](const Vector& v) {
    Vector w(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) w[i] = dot(gram.subspan(i * dim, dim), v);
    return w;
  };
  return top_eigenvalue(apply, dim, max_diag, trace, options);
}

double op_norm(const Matrix& m, const PowerIterationOptions& options) {
  require(!m.empty(), "op_norm: matrix must be nonempty");
  const double max_col = m.max_column_norm();
  const double frob = m.frobenius_norm();
  auto apply = [&](const Vector& v) { return multiply_transposed(m, multiply(m, v)); };
  const double lambda = top_eigenvalue(apply, m.cols(), max_col * max_col, frob * frob, options);
  return std::clamp(std::sqrt(lambda), max_col, std::max(max_col, frob));
}

double op_norm(const Matrix& m, double rel_tol) {
  PowerIterationOptions options;
  options.rel_tol = rel_tol;
  return op_norm(m, options);
}

// ---------------------------------------------------------------------------
// Householder QR
// ---------------------------------------------------------------------------

HouseholderQr::HouseholderQr(Matrix a, bool column_pivoting) : packed_(std::move(a)) {
  const std::size_t m = packed_.rows();
  const std::size_t n = packed_.cols();
  require(m >= n, "HouseholderQr: needs rows >= cols");
  beta_.assign(n, 0.0);
  permutation_.resize(n);
  std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});

  for (std::size_t j = 0; j < n; ++j) {
    if (column_pivoting) {
      std::size_t best = j;
      double best_norm = -1.0;
      for (std::size_t c = j; c < n; ++c) {
        double s = 0.0;
        for (std::size_t i = j; i < m; ++i) s += packed_(i, c) * packed_(i, c);
        if (s > best_norm) {
          best_norm = s;
          best = c;
        }
      }
      if (best != j) {
        for (std::size_t i = 0; i < m; ++i) std::swap(packed_(i, j), packed_(i, best));
        std::swap(permutation_[j], permutation_[best]);
      }
    }

    double scale = 0.0;
    for (std::size_t i = j; i < m; ++i) scale = std::max(scale, std::abs(packed_(i, j)));
    if (scale == 0.0) continue;
    double sq = 0.0;
    for (std::size_t i = j; i < m; ++i) {
      double t = packed_(i, j) / scale;
      sq += t * t;
    }
    const double norm = scale * std::sqrt(sq);
    const double x0 = packed_(j, j);
    const double alpha = x0 >= 0.0 ? -norm : norm;
    // v = x - alpha e1, normalised so v0 = 1.
    const double v0 = x0 - alpha;
    for (std::size_t i = j + 1; i < m; ++i) packed_(i, j) /= v0;
    beta_[j] = -v0 / alpha;
    packed_(j, j) = alpha;

    for (std::size_t c = j + 1; c < n; ++c) {
      double s = packed_(j, c);
      for (std::size_t i = j + 1; i < m; ++i) s += packed_(i, j) * packed_(i, c);
      s *= beta_[j];
      packed_(j, c) -= s;
      for (std::size_t i = j + 1; i < m; ++i) packed_(i, c) -= s * packed_(i, j);
    }
  }
}

std::size_t HouseholderQr::rank(double rel_tol) const {
  const std::size_t n = cols();
  if (n == 0) return 0;
  double largest = 0.0;
  for (std::size_t j = 0; j < n; ++j) largest = std::max(largest, std::abs(packed_(j, j)));
  std::size_t r = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(packed_(j, j)) > rel_tol * largest) ++r;
  return r;
}

namespace {

void apply_reflector(const Matrix& packed, std::size_t j, double beta, Vector& v) {
  if (beta == 0.0) return;
  double s = v[j];
  for (std::size_t i = j + 1; i < packed.rows(); ++i) s += packed(i, j) * v[i];
  s *= beta;
  v[j] -= s;
  for (std::size_t i = j + 1; i < packed.rows(); ++i) v[i] -= s * packed(i, j);
}

}  // namespace

Vector HouseholderQr::apply_q(Vector v) const {
  for (std::size_t j = cols(); j-- > 0;) apply_reflector(packed_, j, beta_[j], v);
  return v;
}

Vector HouseholderQr::apply_qt(Vector v) const {
  for (std::size_t j = 0; j < cols(); ++j) apply_reflector(packed_, j, beta_[j], v);
  return v;
}

Vector null_vector(const Matrix& wide) {
  require(wide.cols() > wide.rows(), "null_vector: matrix must have more columns than rows");
  HouseholderQr qr(wide.transpose(), false);
  Vector e(wide.cols(), 0.0);
  e.back() = 1.0;
  Vector lambda = qr.apply_q(std::move(e));
  const double cutoff = 1e-12 * norm_inf(lambda);
  for (double x : lambda) {
    if (std::abs(x) > cutoff) {
      if (x < 0.0)
        for (double& e2 : lambda) e2 = -e2;
      break;
    }
  }
  return lambda;
}

Vector min_norm_solve(const Matrix& x, std::span<const double> y, double rel_tol) {
  require(y.size() == x.rows(), "min_norm_solve: y length must equal the row count");
  const std::size_t n = x.rows();
  HouseholderQr qr(x.transpose(), true);
  const std::size_t rank = qr.rank(rel_tol);
  const auto& perm = qr.permutation();
  Vector w(x.cols(), 0.0);
  for (std::size_t j = 0; j < std::min(rank, n); ++j) {
    double s = y[perm[j]];
    for (std::size_t i = 0; i < j; ++i) s -= qr.r(i, j) * w[i];
    w[j] = s / qr.r(j, j);
  }
  return qr.apply_q(std::move(w));
}

Vector least_squares(const Matrix& a, std::span<const double> rhs) {
  require(a.rows() >= a.cols() && rhs.size() == a.rows(), "least_squares: shape mismatch");
  const std::size_t n = a.cols();
  HouseholderQr qr(a, false);
  double largest = 0.0;
  for (std::size_t j = 0; j < n; ++j) largest = std::max(largest, std::abs(qr.r(j, j)));
  for (std::size_t j = 0; j < n; ++j)
    if (!(std::abs(qr.r(j, j)) > 1e-14 * largest))
      fail(ErrorCode::RankDeficient, "system is numerically rank deficient");
  Vector c = qr.apply_qt(Vector(rhs.begin(), rhs.end()));
  Vector z(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = c[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= qr.r(ii, k) * z[k];
    z[ii] = s / qr.r(ii, ii);
  }
  return z;
}

Vector solve_square(const Matrix& b, std::span<const double> rhs) {
  require(b.rows() == b.cols(), "solve_square: matrix must be square");
  return least_squares(b, rhs);
}

}  // namespace benign
