#pragma once

// Recursive scalar filters over a ScalarStateModel: the density evolution
// filter (GDEE prediction + Bayes update on a grid), a bootstrap particle
// filter with systematic resampling, and an additive-noise unscented Kalman
// filter.

#include <cstddef>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "pdef/gdee.hpp"
#include "pdef/model.hpp"

namespace pdef {

using Rng = std::mt19937_64;

/// Points at Phi^{-1}((2i+1)/(2n)) * sqrt(variance), weights 1/n.
NoiseQuantization gaussian_quantile_points(std::size_t n, double variance);

/// Normal density of y - y_pred with variance R.
double gaussian_likelihood(double y, double y_pred, double variance);

// ---------------------------------------------------------------------------
// Density evolution filter

struct PdefConfig {
  /// Collocation nodes per grid (order + 1).
  std::size_t grid_nodes = 100;
  std::size_t state_quantiles = 16;
  std::size_t noise_points = 16;
  double width_factor = 1.5;
  std::size_t velocity_bins = 64;
  /// Half-width of the initial grid in initial standard deviations.
  double initial_halfwidth_sd = 8.0;
  /// Let each branch's mollifier carry sigma^2 of the process-noise variance
  /// and shrink its noise point to the remaining Q - sigma^2, so the prior is
  /// not widened by the mollification. Assumes additive process noise.
  bool split_noise = true;

  void validate() const;
  std::size_t order() const { return grid_nodes - 1; }
};

struct PdefState {
  GridDensity posterior;
};

/// Gaussian initial density N(mu0, P0) sampled onto a grid of
/// mu0 +/- initial_halfwidth_sd * sqrt(P0).
PdefState pdef_init(const ScalarStateModel& model, const PdefConfig& cfg);

/// Prior p(x_k | y_{1:k-1}) by density evolution from the previous posterior.
GridDensity pdef_predict(const PdefState& state, const ScalarStateModel& model,
                         const NoiseQuantization& noise, int k, const PdefConfig& cfg);

/// Posterior = prior * likelihood, renormalized on the grid. Likelihoods are
/// scaled by their largest value over nodes carrying prior mass before
/// exponentiation, which leaves the normalized result unchanged.
GridDensity bayes_update(const GridDensity& prior, const ScalarStateModel& model, int k, double y);

PdefState pdef_step(const PdefState& state, const ScalarStateModel& model, const NoiseQuantization& noise,
                    int k, double y, const PdefConfig& cfg);

// ---------------------------------------------------------------------------
// Particle filter

struct PfState {
  std::vector<double> particles;
  std::vector<double> weights;
};

PfState pf_init(const ScalarStateModel& model, std::size_t count, Rng& rng);

/// Indices drawn with positions (u0 + i) / n_out against the cumulative
/// weights.
std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t n_out, double u0);

/// Bootstrap proposal, likelihood weighting, systematic resampling. Throws
/// WeightUnderflow when every likelihood is below 1e-300.
PfState pf_step(const PfState& state, const ScalarStateModel& model, int k, double y, Rng& rng);

// ---------------------------------------------------------------------------
// Unscented Kalman filter

/// Scaled unscented transform, lambda = alpha^2 (1 + kappa) - 1. beta = 2
/// is the Gaussian-optimal choice; kappa = 0 keeps the centre mean weight at
/// zero.
struct UkfParams {
  double alpha = 1.0;
  double beta = 2.0;
  double kappa = 0.0;
};

struct UkfState {
  double mean = 0.0;
  double variance = 1.0;
};

UkfState ukf_init(const ScalarStateModel& model);

UkfState ukf_step(const UkfState& state, const ScalarStateModel& model, int k, double y,
                  const UkfParams& params = {});

// ---------------------------------------------------------------------------

using FilterState = std::variant<PdefState, PfState, UkfState>;

/// Posterior mean.
double estimate(const FilterState& state);

}  // namespace pdef
