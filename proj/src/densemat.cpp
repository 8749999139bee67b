#include "pdef/densemat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace pdef {

namespace {

void require_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("DenseMatrix: non-finite entry");
  }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

SingularMatrixError::SingularMatrixError(std::size_t pivot, double magnitude)
    : std::runtime_error("lu_solve: matrix is singular to tolerance at pivot " +
                         std::to_string(pivot) + " (|pivot| = " + std::to_string(magnitude) + ")"),
      pivot_(pivot) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("DenseMatrix: entry count does not match rows*cols");
  }
  require_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  require_finite(m.data());
  return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> v) {
  return DenseMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: a.cols != b.rows");
  const std::size_t n = a.rows(), m = a.cols(), p = b.cols();
  DenseMatrix c(n, p);
  auto cd = c.data();
  auto ad = a.data();
  auto bd = b.data();
  // i-k-j order keeps the inner loop contiguous in both b and c.
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = cd.data() + i * p;
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = ad[i * m + k];
      if (aik == 0.0) continue;
      const double* bk = bd.data() + k * p;
      for (std::size_t j = 0; j < p; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    y[i] = std::inner_product(r.begin(), r.end(), x.begin(), 0.0);
  }
  return y;
}

double one_norm(const DenseMatrix& a) {
  std::vector<double> sums(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) sums[j] += std::abs(a(i, j));
  }
  return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b, double pivot_tol) {
  if (!a.square()) throw std::invalid_argument("lu_solve: matrix is not square");
  if (a.rows() != b.rows()) throw std::invalid_argument("lu_solve: rhs row count mismatch");

  const std::size_t n = a.rows(), nrhs = b.cols();
  DenseMatrix lu = a;
  DenseMatrix x = b;
  const double threshold = pivot_tol * std::max(max_abs(a), 1e-300);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        piv = i;
      }
    }
    if (!(best > threshold)) throw SingularMatrixError(k, best);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (std::size_t j = 0; j < nrhs; ++j) std::swap(x(k, j), x(piv, j));
    }
    const double inv = 1.0 / lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) * inv;
      if (f == 0.0) continue;
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < nrhs; ++j) x(i, j) -= f * x(k, j);
    }
  }

  for (std::size_t kk = n; kk-- > 0;) {
    const double inv = 1.0 / lu(kk, kk);
    for (std::size_t j = 0; j < nrhs; ++j) {
      double s = x(kk, j);
      for (std::size_t i = kk + 1; i < n; ++i) s -= lu(kk, i) * x(i, j);
      x(kk, j) = s * inv;
    }
  }
  return x;
}

DenseMatrix expm(const DenseMatrix& a) {
  if (!a.square()) throw std::invalid_argument("expm: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return a;

  // c_k = (2m-k)! m! / ((2m)! k! (m-k)!) for m = 6
  constexpr std::array<double, 7> c = {
      1.0, 1.0 / 2.0, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};

  const double norm = one_norm(a);
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  // ceil(log2) can land one short in floating point.
  while (std::ldexp(norm, -s) > 0.5) ++s;

  DenseMatrix x = a;
  x *= std::ldexp(1.0, -s);

  const DenseMatrix id = DenseMatrix::identity(n);
  const DenseMatrix x2 = matmul(x, x);
  const DenseMatrix x4 = matmul(x2, x2);
  const DenseMatrix x6 = matmul(x4, x2);

  DenseMatrix odd = c[1] * id + c[3] * x2 + c[5] * x4;
  const DenseMatrix u = matmul(x, odd);
  const DenseMatrix v = c[0] * id + c[2] * x2 + c[4] * x4 + c[6] * x6;

  DenseMatrix result = lu_solve(v - u, v + u);
  for (int i = 0; i < s; ++i) result = matmul(result, result);
  return result;
}

}  // namespace pdef
