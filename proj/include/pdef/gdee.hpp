#pragma once

// One-step density prediction by the generalized density evolution equation
//   dp/dtau + xdot dp/dx = 0
// on a Chebyshev collocation grid. Each representative (start state, noise)
// branch carries a mollified delta along its characteristic with constant
// velocity over one unit of pseudo-time; the prior is the mass-weighted sum.

#include <cstddef>
#include <span>
#include <vector>

#include "pdef/chebyshev.hpp"
#include "pdef/densemat.hpp"
#include "pdef/model.hpp"

namespace pdef {

/// Density per unit physical x at the nodes of a SpectralGrid.
class GridDensity {
public:
  /// Throws std::invalid_argument on a length mismatch or a negative or
  /// non-finite value.
  GridDensity(SpectralGrid grid, std::vector<double> values);

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }

private:
  SpectralGrid grid_;
  std::vector<double> values_;
};

struct Branch {
  double start_state = 0.0;
  double noise_value = 0.0;
  double mass = 0.0;
  double end_state = 0.0;
  /// Physical units per unit pseudo-time.
  double velocity = 0.0;
};

struct PriorOptions {
  double width_factor = 1.5;
  /// Branches are grouped into this many velocity bins per step. Zero
  /// advects every branch with its own exponential (slow; reference path).
  std::size_t velocity_bins = 64;
};

/// Clenshaw-Curtis integral of the density over its domain.
double integrate(const GridDensity& density);
double mean(const GridDensity& density);
double variance(const GridDensity& density);

/// Divides by the quadrature integral. Throws FilterDivergence when the
/// integral is at or below 1e-300.
GridDensity normalize(const GridDensity& density);

/// Standard deviation of the mollified delta centred at x.
double mollifier_sigma(const SpectralGrid& grid, double center, double width_factor);

/// Gaussian of the given sigma sampled at the nodes, scaled to unit
/// quadrature mass.
std::vector<double> gaussian_bump(const SpectralGrid& grid, double center, double sigma);

/// Grid stand-in for a Dirac delta at center: a Gaussian bump with
/// sigma = width_factor * local node spacing, normalized to unit mass.
/// Throws std::domain_error if center is not strictly inside the domain.
GridDensity mollified_delta(const SpectralGrid& grid, double center, double width_factor);

/// exp(-c D) on the (N+1)-node grid for a reference-interval shift c, with
/// a homogeneous inflow condition: the inflow node's row and column are
/// dropped before exponentiating and map to zero.
DenseMatrix advection_propagator(std::size_t order, double reference_shift);

/// Endpoint values tied to their mean, then negatives clipped to zero.
void tie_and_clip(std::span<double> values);

/// Transports the density by velocity*dt (physical units) through the
/// matrix exponential of the collocation operator. Not renormalized.
/// Throws SupportError if the shifted support (values above
/// support_threshold times the peak) would come within two edge spacings of
/// either boundary.
GridDensity advect_step(const GridDensity& density, double velocity, double dt,
                        double support_threshold = 1e-12);

/// Equal-probability quantiles (i + 1/2)/count of the density, from the
/// antiderivative of its Chebyshev interpolant. Throws FilterDivergence for
/// a density without mass.
std::vector<double> density_quantiles(const GridDensity& density, std::size_t count);

/// Cartesian product of state_quantiles posterior quantile points with the
/// noise points; end_state = transition(start, k, noise), velocity = end - start.
std::vector<Branch> make_branches(const GridDensity& posterior, const NoiseQuantization& noise,
                                  const ScalarStateModel& model, int k, std::size_t state_quantiles);

/// Interval spanning every branch's start and end state plus a margin of
/// max(4 (noise_std + sigma), 8 sigma), where sigma is the mollifier width the
/// resulting grid will produce at its centre.
Interval select_domain(std::span<const Branch> branches, double noise_std, std::size_t order,
                       double width_factor);

/// Prior density on grid: each branch's mass-weighted mollified delta at its
/// start state advected by its velocity for unit pseudo-time, summed,
/// clipped and normalized.
GridDensity assemble_prior(std::span<const Branch> branches, const SpectralGrid& grid,
                           const PriorOptions& options = {});

}  // namespace pdef
