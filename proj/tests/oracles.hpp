#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "pdef/densemat.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix to_rows(const pdef::DenseMatrix& m) {
  Matrix out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline Matrix mul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), m = b.size(), p = b.empty() ? 0 : b[0].size();
  Matrix c(n, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      long double s = 0.0L;
      for (std::size_t k = 0; k < m; ++k) s += static_cast<long double>(a[i][k]) * b[k][j];
      c[i][j] = static_cast<double>(s);
    }
  return c;
}

inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (const auto& r : a)
    for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

/// Truncated Taylor series of e^A in long double, summed until the term is
/// negligible. Convergent and accurate for ||A|| <= 2.
inline Matrix taylor_expm(const Matrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> sum(n, std::vector<long double>(n, 0.0L)), term = sum;
  for (std::size_t i = 0; i < n; ++i) sum[i][i] = term[i][i] = 1.0L;
  for (int k = 1; k < 80; ++k) {
    std::vector<std::vector<long double>> next(n, std::vector<long double>(n, 0.0L));
    long double biggest = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        long double s = 0.0L;
        for (std::size_t l = 0; l < n; ++l) s += term[i][l] * a[l][j];
        next[i][j] = s / k;
        biggest = std::max(biggest, std::fabs(next[i][j]));
      }
    term = next;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += term[i][j];
    if (biggest < 1e-30L) break;
  }
  Matrix out(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = static_cast<double>(sum[i][j]);
  return out;
}

/// Random n x n matrix scaled to the requested 1-norm.
inline pdef::DenseMatrix random_matrix(std::size_t n, double target_norm, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> e(n * n);
  for (double& x : e) x = u(rng);
  pdef::DenseMatrix m(n, n, e);
  const double s = target_norm / pdef::one_norm(m);
  m *= s;
  return m;
}

/// Chebyshev polynomial and its derivative via the angle form,
/// T_n(cos t) = cos(n t), T_n'(cos t) = n sin(n t) / sin(t).
inline double cheb_t(int n, double x) { return std::cos(n * std::acos(x)); }
inline double cheb_dt(int n, double x) {
  if (x >= 1.0) return static_cast<double>(n) * n;
  if (x <= -1.0) return ((n % 2 == 0) ? -1.0 : 1.0) * n * n;
  const double t = std::acos(x);
  return n * std::sin(n * t) / std::sin(t);
}

/// Scalar Kalman filter for x_k = a x_{k-1} + v, y_k = c x_k + w.
struct Kalman {
  double mean;
  double var;
  void step(double a, double q, double c, double r, double y) {
    const double mp = a * mean, pp = a * a * var + q;
    const double s = c * c * pp + r, k = pp * c / s;
    mean = mp + k * (y - c * mp);
    var = (1.0 - k * c) * pp;
  }
};

/// Histogram density of samples over [lo, hi] with `bins` bins; samples
/// outside the interval are counted in `outside`.
struct Histogram {
  double lo, hi;
  std::vector<double> density;
  double outside_mass;
};

inline Histogram histogram(const std::vector<double>& samples, double lo, double hi, std::size_t bins) {
  Histogram h{lo, hi, std::vector<double>(bins, 0.0), 0.0};
  const double width = (hi - lo) / static_cast<double>(bins);
  std::size_t outside = 0;
  for (double s : samples) {
    if (s < lo || s >= hi) {
      ++outside;
      continue;
    }
    h.density[std::min(bins - 1, static_cast<std::size_t>((s - lo) / width))] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  for (double& d : h.density) d /= n * width;
  h.outside_mass = static_cast<double>(outside) / n;
  return h;
}

/// Monte-Carlo samples of transition(x0, k, v), x0 ~ N(m0, p0), v ~ N(0, q).
inline std::vector<double> propagate_samples(const std::function<double(double, int, double)>& g, int k,
                                             double m0, double p0, double q, std::size_t count,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(count);
  for (auto& x : out) {
    const double x0 = m0 + std::sqrt(p0) * unit(rng);
    x = g(x0, k, std::sqrt(q) * unit(rng));
  }
  return out;
}

}  // namespace oracle
