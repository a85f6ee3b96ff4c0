#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace orthoforms {

using Integer = mpz_class;
using Rational = mpq_class;

/// Failure categories. The CLI maps them onto its exit codes.
enum class ErrorKind {
  kInternal,    // a self-check failed
  kValidation,  // malformed or inconsistent input
  kMissingData  // input is well formed but incomplete for the request
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorKind::kValidation, what);
}
[[noreturn]] inline void fail_internal(const std::string& what) {
  throw Error(ErrorKind::kInternal, what);
}

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "p/q" with q > 0 always present, e.g. "5/1", "-3/2".
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);
/// Accepts "p/q", "p" or an integral decimal.
Rational parse_rational(std::string_view text);

Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);
bool is_integral(const Rational& r);

/// Dense row-major matrix over an exact ring.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) fail("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail("matrix dimension mismatch in product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      fail("matrix dimension mismatch in sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  Matrix scaled(const T& s) const {
    Matrix m = *this;
    for (auto& x : m.data_) x *= s;
    return m;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) fail("matrix-vector dimension mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using RatVector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

RatMatrix to_rational(const IntMatrix& m);
RatVector to_rational(const IntVector& v);

/// Fraction-free (Bareiss) determinant.
Integer determinant(const IntMatrix& m);
/// Exact inverse by Gauss-Jordan; throws on singular input.
RatMatrix inverse(const RatMatrix& m);

/// Invariant factors d_1 | d_2 | ... of an integer matrix (zeros for rank
/// deficiency are reported as 0 at the end).
std::vector<Integer> smith_invariants(const IntMatrix& m);

Rational dot(const RatVector& a, const RatVector& b);
/// x^T m y
Rational bilinear(const RatMatrix& m, const RatVector& x, const RatVector& y);

Integer gcd_all(const std::vector<Integer>& v);
/// Number of positive divisors.
long divisor_count(long n);

}  // namespace orthoforms
