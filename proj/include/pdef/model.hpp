#pragma once

#include <functional>
#include <vector>

namespace pdef {

struct GaussianSpec {
  double mean = 0.0;
  double variance = 1.0;
};

/// Scalar state-space model
///   x_k = transition(x_{k-1}, k, v_{k-1}),  v ~ N(0, Q)
///   y_k = observation(x_k, k) + w_k,        w ~ N(0, R)
/// Filters that assume additive process noise call transition(x, k, 0).
struct ScalarStateModel {
  std::function<double(double x, int k, double v)> transition;
  std::function<double(double x, int k)> observation;
  GaussianSpec process_noise{0.0, 1.0};
  GaussianSpec obs_noise{0.0, 1.0};
  GaussianSpec initial{0.0, 1.0};

  /// Throws std::invalid_argument unless Q, R and P0 are positive and both
  /// maps are set.
  void validate() const;
};

/// Deterministic representative points of a noise law with probability weights.
struct NoiseQuantization {
  std::vector<double> points;
  std::vector<double> weights;

  /// Throws std::invalid_argument unless the points strictly increase and the
  /// weights are positive and sum to 1.
  void validate() const;
};

}  // namespace pdef
