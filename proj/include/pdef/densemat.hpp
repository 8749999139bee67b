#pragma once

// Small dense row-major matrices and the handful of kernels the density
// propagator needs: products, the 1-norm, an LU solve and the matrix
// exponential (diagonal Pade with scaling and squaring).

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pdef {

/// Raised by lu_solve when a pivot falls below tolerance.
class SingularMatrixError : public std::runtime_error {
public:
  SingularMatrixError(std::size_t pivot, double magnitude);
  std::size_t pivot() const noexcept { return pivot_; }

private:
  std::size_t pivot_;
};

class DenseMatrix {
public:
  DenseMatrix() = default;

  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major entries. Throws std::invalid_argument if the
  /// size does not match or an entry is not finite.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  /// Nested initializer, one inner list per row.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

  bool operator==(const DenseMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// y = A x
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);

/// Maximum absolute column sum.
double one_norm(const DenseMatrix& a);

/// Maximum absolute entry.
double max_abs(const DenseMatrix& a);

DenseMatrix transpose(const DenseMatrix& a);

/// Solves A X = B by LU with partial pivoting. A pivot whose magnitude is
/// below pivot_tol * max|A| raises SingularMatrixError naming that column.
DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b, double pivot_tol = 1e-14);

/// Matrix exponential. A degree (6,6) Pade approximant is evaluated on
/// A / 2^s, where s is the smallest integer with ||A||_1 / 2^s <= 0.5, and
/// the result is squared s times.
DenseMatrix expm(const DenseMatrix& a);

}  // namespace pdef
