#pragma once

// Exact linear algebra over a prime field F_p with p < 2^32.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qc {

inline constexpr std::uint32_t kMersenne31 = 2147483647u;
/// Largest prime below 2^32; the escalation target when sampling fails at the default prime.
inline constexpr std::uint32_t kLargestPrime32 = 4294967291u;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p = kMersenne31) : p_(p), mersenne_(p == kMersenne31) {
    if (!is_prime(p)) throw InputError("field modulus " + std::to_string(p) + " is not prime");
  }

  std::uint32_t modulus() const noexcept { return p_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    return a >= b ? a - b : static_cast<std::uint32_t>(std::uint64_t{a} + p_ - b);
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint64_t x = std::uint64_t{a} * b;
    if (mersenne_) {
      x = (x & kMersenne31) + (x >> 31);
      x = (x & kMersenne31) + (x >> 31);
      return static_cast<std::uint32_t>(x >= p_ ? x - p_ : x);
    }
    return static_cast<std::uint32_t>(x % p_);
  }

  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw DomainError("inverse of zero in F_p");
    return pow(a, p_ - 2);
  }

  std::uint32_t from_int(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<std::uint32_t>(r);
  }

  /// Symmetric lift to (-p/2, p/2], used when printing small signed values.
  std::int64_t to_signed(std::uint32_t a) const noexcept {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : a;
  }

  template <class Rng>
  std::uint32_t random(Rng& rng) const {
    return static_cast<std::uint32_t>(rng() % p_);
  }

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

 private:
  std::uint32_t p_;
  bool mersenne_;
};

/// Dense row-major matrix with entries reduced modulo the field in use.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<std::uint32_t> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw InputError("matrix data size does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  std::uint32_t& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<std::uint32_t> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const std::uint32_t> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  const std::vector<std::uint32_t>& data() const noexcept { return data_; }

  bool is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](std::uint32_t v) { return v == 0; });
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> data_;
};

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  return t;
}

inline Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto orow = out.row(r);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      std::uint32_t x = a(r, k);
      if (x == 0) continue;
      auto brow = b.row(k);
      for (std::size_t c = 0; c < b.cols(); ++c)
        if (brow[c]) orow[c] = f.add(orow[c], f.mul(x, brow[c]));
    }
  }
  return out;
}

inline Matrix add(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix sum shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = f.add(a(r, c), b(r, c));
  return out;
}

inline Matrix scale(const PrimeField& f, std::uint32_t s, Matrix a) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (auto& v : a.row(r)) v = f.mul(s, v);
  return a;
}

inline std::uint32_t trace(const PrimeField& f, const Matrix& a) {
  std::uint32_t t = 0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t = f.add(t, a(i, i));
  return t;
}

/// Horizontal concatenation; all blocks must have equal row counts.
inline Matrix hstack(std::span<const Matrix> blocks, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw InputError("hstack row mismatch");
    cols += b.cols();
  }
  Matrix out(rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, off + c) = b(r, c);
    off += b.cols();
  }
  return out;
}

inline Matrix vstack(std::span<const Matrix> blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw InputError("vstack column mismatch");
    rows += b.rows();
  }
  Matrix out(rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < cols; ++c) out(off + r, c) = b(r, c);
    off += b.rows();
  }
  return out;
}

struct RowEchelon {
  Matrix reduced;                    // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

/// Gauss-Jordan elimination. Rows whose pivot-column entry is already zero are skipped,
/// which keeps the cost low on the banded systems produced by path quivers.
inline RowEchelon rref(const PrimeField& f, Matrix m) {
  RowEchelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = col; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    std::uint32_t inv = f.inv(m(row, col));
    auto prow = m.row(row);
    for (std::size_t c = col; c < m.cols(); ++c) prow[c] = f.mul(prow[c], inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      std::uint32_t x = m(r, col);
      if (x == 0) continue;
      auto rr = m.row(r);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (prow[c]) rr[c] = f.sub(rr[c], f.mul(x, prow[c]));
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const PrimeField& f, Matrix m) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = col; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    std::uint32_t inv = f.inv(m(row, col));
    auto prow = m.row(row);
    for (std::size_t r = row + 1; r < m.rows(); ++r) {
      std::uint32_t x = m(r, col);
      if (x == 0) continue;
      std::uint32_t factor = f.mul(x, inv);
      auto rr = m.row(r);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (prow[c]) rr[c] = f.sub(rr[c], f.mul(factor, prow[c]));
    }
    ++row;
  }
  return row;
}

/// Basis of {x : m x = 0}, returned as the columns of a (cols x k) matrix.
inline Matrix nullspace(const PrimeField& f, const Matrix& m) {
  RowEchelon e = rref(f, m);
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto p : e.pivots) is_pivot[p] = 1;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix basis(m.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      basis(e.pivots[r], k) = f.neg(e.reduced(r, free[k]));
  }
  return basis;
}

/// Basis of the column space, as the linearly independent columns of m (in order).
inline Matrix column_basis(const PrimeField& f, const Matrix& m) {
  RowEchelon e = rref(f, m);
  Matrix out(m.rows(), e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k)
    for (std::size_t r = 0; r < m.rows(); ++r) out(r, k) = m(r, e.pivots[k]);
  return out;
}

/// A left inverse L (k x n) of a full-column-rank matrix q (n x k): L q = I.
inline Matrix left_inverse(const PrimeField& f, const Matrix& q) {
  const std::size_t n = q.rows(), k = q.cols();
  // Reduce [q | I_n] by rows; the first k rows of the transformed identity give L.
  Matrix aug(n, k + n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) aug(r, c) = q(r, c);
    aug(r, k + r) = 1;
  }
  RowEchelon e = rref(f, std::move(aug));
  for (std::size_t c = 0; c < k; ++c)
    if (c >= e.pivots.size() || e.pivots[c] != c) throw DomainError("left_inverse: matrix lacks full column rank");
  Matrix l(k, n);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < n; ++c) l(r, c) = e.reduced(r, k + c);
  return l;
}

template <class Rng>
Matrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (auto& v : m.row(r)) v = f.random(rng);
  return m;
}

/// Invertible matrix drawn by rejection; over large fields the first draw almost always succeeds.
template <class Rng>
Matrix random_invertible(const PrimeField& f, std::size_t n, Rng& rng) {
  for (;;) {
    Matrix m = random_matrix(f, n, n, rng);
    if (rank(f, m) == n) return m;
  }
}

/// Inverse of a square matrix.
inline Matrix inverse(const PrimeField& f, const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("inverse of non-square matrix");
  return left_inverse(f, m);
}

}  // namespace qc
