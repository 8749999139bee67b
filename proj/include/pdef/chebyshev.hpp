#pragma once

// Chebyshev collocation on Gauss-Lobatto nodes x_j = -cos(pi j / N), listed in
// ascending order, together with quadrature, interpolation and the affine map
// between a physical interval and the reference interval [-1, 1].

#include <cstddef>
#include <span>
#include <vector>

#include "pdef/densemat.hpp"

namespace pdef {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Physical x in [lo, hi] to reference xi in [-1, 1]. Throws
/// std::invalid_argument for a degenerate interval.
double affine_map(const Interval& domain, double x_physical);
double affine_unmap(const Interval& domain, double xi);
/// d(xi)/dx = 2 / (hi - lo); multiplies physical velocities.
double affine_scale(const Interval& domain);

std::vector<double> gauss_lobatto_nodes(std::size_t order);

/// (N+1)x(N+1) collocation derivative on the ascending Gauss-Lobatto nodes.
/// Off-diagonal entries use the closed form; the diagonal is the negative
/// row sum, so D annihilates constants to rounding.
DenseMatrix diff_matrix(std::size_t order);

/// T_j(x) = cos(j arccos x). Throws std::domain_error for |x| > 1.
double eval_chebyshev(std::size_t degree, double x);

/// Clenshaw-Curtis weights on the Gauss-Lobatto nodes of [-1, 1].
std::vector<double> cc_weights(std::size_t order);

/// Coefficients a_k of the degree-N interpolant sum_k a_k T_k through
/// nodal values on the Gauss-Lobatto nodes.
std::vector<double> chebyshev_coefficients(std::span<const double> values);

/// Coefficients of the antiderivative F with F(-1) = 0. One longer than input.
std::vector<double> integrate_coefficients(std::span<const double> coeffs);

/// Clenshaw evaluation of sum_k a_k T_k(xi).
double clenshaw(std::span<const double> coeffs, double xi);

/// Gauss-Lobatto nodes mapped onto a physical interval, with the matching
/// Clenshaw-Curtis weights (already scaled by the interval's Jacobian) and
/// barycentric weights. Immutable after construction.
class SpectralGrid {
public:
  SpectralGrid(std::size_t order, Interval domain);

  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_ + 1; }
  const Interval& domain() const noexcept { return domain_; }

  std::span<const double> reference_nodes() const noexcept { return ref_nodes_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  /// Reference-interval weights, summing to 2.
  std::span<const double> quad_weights() const noexcept { return ref_weights_; }
  /// Physical-interval weights, summing to the interval width.
  std::span<const double> physical_weights() const noexcept { return weights_; }

  /// Index of the node closest to x.
  std::size_t nearest_node(double x) const;
  /// Mean of the physical spacings on either side of the node nearest x.
  double local_spacing(double x) const;

  /// Integral over the domain of the interpolant through values.
  double integrate(std::span<const double> values) const;

private:
  std::size_t order_;
  Interval domain_;
  std::vector<double> ref_nodes_;
  std::vector<double> nodes_;
  std::vector<double> ref_weights_;
  std::vector<double> weights_;
  std::vector<double> bary_weights_;

  friend double barycentric_interp(const SpectralGrid&, std::span<const double>, double);
};

/// Value at physical x of the interpolant through (node, value) pairs.
/// Throws std::domain_error outside the grid's domain and
/// std::invalid_argument on a length mismatch.
double barycentric_interp(const SpectralGrid& grid, std::span<const double> values, double x);

}  // namespace pdef
