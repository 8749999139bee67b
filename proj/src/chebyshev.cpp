#include "pdef/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdef {

namespace {

void require_order(std::size_t order, const char* what) {
  if (order == 0) throw std::invalid_argument(std::string(what) + ": order must be >= 1");
}

void require_interval(const Interval& d) {
  if (!(d.lo < d.hi) || !std::isfinite(d.lo) || !std::isfinite(d.hi)) {
    throw std::invalid_argument("degenerate interval: require lo < hi");
  }
}

}  // namespace

double affine_map(const Interval& domain, double x_physical) {
  require_interval(domain);
  return (2.0 * x_physical - domain.lo - domain.hi) / domain.width();
}

double affine_unmap(const Interval& domain, double xi) {
  require_interval(domain);
  return domain.midpoint() + 0.5 * domain.width() * xi;
}

double affine_scale(const Interval& domain) {
  require_interval(domain);
  return 2.0 / domain.width();
}

std::vector<double> gauss_lobatto_nodes(std::size_t order) {
  require_order(order, "gauss_lobatto_nodes");
  const double n = static_cast<double>(order);
  std::vector<double> x(order + 1);
  // sin form is symmetric to the last bit, unlike -cos(pi j / N).
  for (std::size_t j = 0; j <= order; ++j) {
    x[j] = std::sin(std::numbers::pi * (2.0 * static_cast<double>(j) - n) / (2.0 * n));
  }
  x.front() = -1.0;
  x.back() = 1.0;
  return x;
}

DenseMatrix diff_matrix(std::size_t order) {
  require_order(order, "diff_matrix");
  const std::size_t n = order;
  const auto x = gauss_lobatto_nodes(n);
  DenseMatrix d(n + 1, n + 1);
  auto c = [n](std::size_t i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
  for (std::size_t i = 0; i <= n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = c(i) / c(j) * sign / (x[i] - x[j]);
      row_sum += d(i, j);
    }
    d(i, i) = -row_sum;
  }
  return d;
}

double eval_chebyshev(std::size_t degree, double x) {
  if (!(std::abs(x) <= 1.0)) throw std::domain_error("eval_chebyshev: |x| > 1");
  return std::cos(static_cast<double>(degree) * std::acos(x));
}

std::vector<double> cc_weights(std::size_t order) {
  require_order(order, "cc_weights");
  const std::size_t n = order;
  const double nd = static_cast<double>(n);
  std::vector<double> w(n + 1, 0.0);
  if (n == 1) return {1.0, 1.0};

  // Cosine-series form of the Clenshaw-Curtis rule; the node set is
  // symmetric so ordering does not matter.
  std::vector<double> v(n - 1, 1.0);
  auto theta = [nd](std::size_t j) { return std::numbers::pi * static_cast<double>(j) / nd; };
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (nd * nd - 1.0);
    for (std::size_t k = 1; k < n / 2; ++k) {
      const double kd = static_cast<double>(k);
      for (std::size_t j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * kd * theta(j)) / (4.0 * kd * kd - 1.0);
    }
    for (std::size_t j = 1; j < n; ++j) v[j - 1] -= std::cos(nd * theta(j)) / (nd * nd - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (nd * nd);
    for (std::size_t k = 1; k <= (n - 1) / 2; ++k) {
      const double kd = static_cast<double>(k);
      for (std::size_t j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * kd * theta(j)) / (4.0 * kd * kd - 1.0);
    }
  }
  for (std::size_t j = 1; j < n; ++j) w[j] = 2.0 * v[j - 1] / nd;
  return w;
}

std::vector<double> chebyshev_coefficients(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("chebyshev_coefficients: need at least 2 values");
  const std::size_t n = values.size() - 1;
  const double nd = static_cast<double>(n);
  std::vector<double> a(n + 1, 0.0);
  // Ascending node j sits at angle pi - pi j / N, so T_k(x_j) = (-1)^k cos(pi k j / N).
  for (std::size_t k = 0; k <= n; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const double half = (j == 0 || j == n) ? 0.5 : 1.0;
      s += half * values[j] * std::cos(std::numbers::pi * static_cast<double>(k * j % (2 * n)) / nd);
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double scale = (k == 0 || k == n) ? 1.0 / nd : 2.0 / nd;
    a[k] = sign * scale * s;
  }
  return a;
}

std::vector<double> integrate_coefficients(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  auto a = [&](std::size_t k) { return k < n ? coeffs[k] : 0.0; };
  std::vector<double> b(n + 1, 0.0);
  if (n == 0) return b;
  b[1] = a(0) - 0.5 * a(2);
  for (std::size_t k = 2; k <= n; ++k) {
    b[k] = (a(k - 1) - a(k + 1)) / (2.0 * static_cast<double>(k));
  }
  double at_minus_one = 0.0;
  for (std::size_t k = 1; k <= n; ++k) at_minus_one += (k % 2 == 0) ? b[k] : -b[k];
  b[0] = -at_minus_one;
  return b;
}

double clenshaw(std::span<const double> coeffs, double xi) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    const double b0 = 2.0 * xi * b1 - b2 + coeffs[k];
    b2 = b1;
    b1 = b0;
  }
  const double a0 = coeffs.empty() ? 0.0 : coeffs[0];
  return xi * b1 - b2 + a0;
}

SpectralGrid::SpectralGrid(std::size_t order, Interval domain)
    : order_(order), domain_(domain) {
  require_order(order, "SpectralGrid");
  require_interval(domain);
  ref_nodes_ = gauss_lobatto_nodes(order);
  ref_weights_ = cc_weights(order);
  nodes_.resize(order + 1);
  weights_.resize(order + 1);
  bary_weights_.resize(order + 1);
  const double jac = 0.5 * domain.width();
  for (std::size_t j = 0; j <= order; ++j) {
    nodes_[j] = affine_unmap(domain, ref_nodes_[j]);
    weights_[j] = jac * ref_weights_[j];
    const double half = (j == 0 || j == order) ? 0.5 : 1.0;
    bary_weights_[j] = (j % 2 == 0) ? half : -half;
  }
  nodes_.front() = domain.lo;
  nodes_.back() = domain.hi;
}

std::size_t SpectralGrid::nearest_node(double x) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.begin()) return 0;
  if (it == nodes_.end()) return order_;
  const auto hi = static_cast<std::size_t>(it - nodes_.begin());
  return (x - nodes_[hi - 1] <= nodes_[hi] - x) ? hi - 1 : hi;
}

double SpectralGrid::local_spacing(double x) const {
  const std::size_t j = nearest_node(x);
  if (j == 0) return nodes_[1] - nodes_[0];
  if (j == order_) return nodes_[order_] - nodes_[order_ - 1];
  return 0.5 * (nodes_[j + 1] - nodes_[j - 1]);
}

double SpectralGrid::integrate(std::span<const double> values) const {
  if (values.size() != size()) throw std::invalid_argument("SpectralGrid::integrate: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += weights_[j] * values[j];
  return s;
}

double barycentric_interp(const SpectralGrid& grid, std::span<const double> values, double x) {
  if (values.size() != grid.size()) throw std::invalid_argument("barycentric_interp: length mismatch");
  if (!grid.domain().contains(x)) throw std::domain_error("barycentric_interp: x outside domain");
  const auto nodes = grid.nodes();
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double diff = x - nodes[j];
    if (diff == 0.0) return values[j];
    const double t = grid.bary_weights_[j] / diff;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

}  // namespace pdef
