#include "pdef/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "pdef/errors.hpp"

namespace pdef {

void ScalarStateModel::validate() const {
  if (!transition || !observation) throw std::invalid_argument("ScalarStateModel: transition and observation required");
  if (!(process_noise.variance > 0.0)) throw std::invalid_argument("ScalarStateModel: Q must be positive");
  if (!(obs_noise.variance > 0.0)) throw std::invalid_argument("ScalarStateModel: R must be positive");
  if (!(initial.variance > 0.0)) throw std::invalid_argument("ScalarStateModel: P0 must be positive");
}

void NoiseQuantization::validate() const {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument("NoiseQuantization: points and weights must be nonempty and equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(weights[i] > 0.0)) throw std::invalid_argument("NoiseQuantization: weights must be positive");
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw std::invalid_argument("NoiseQuantization: points must be strictly increasing");
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("NoiseQuantization: weights must sum to 1");
}

NoiseQuantization gaussian_quantile_points(std::size_t n, double variance) {
  if (n == 0) throw std::invalid_argument("gaussian_quantile_points: n must be >= 1");
  if (!(variance > 0.0)) throw std::invalid_argument("gaussian_quantile_points: variance must be positive");
  const boost::math::normal_distribution<double> unit;
  const double sd = std::sqrt(variance);
  NoiseQuantization q;
  q.points.resize(n);
  q.weights.assign(n, 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
    q.points[i] = sd * boost::math::quantile(unit, p);
  }
  // Exact antisymmetry; the upper half mirrors the lower half.
  for (std::size_t i = 0; i < n / 2; ++i) q.points[n - 1 - i] = -q.points[i];
  if (n % 2 == 1) q.points[n / 2] = 0.0;
  // 1/n does not always sum to 1 in floating point.
  const double sum = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
  q.weights.back() += 1.0 - sum;
  return q;
}

double gaussian_likelihood(double y, double y_pred, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("gaussian_likelihood: variance must be positive");
  const double r = y - y_pred;
  return std::exp(-0.5 * r * r / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

// --- density evolution filter ----------------------------------------------

void PdefConfig::validate() const {
  if (grid_nodes < 3) throw std::invalid_argument("PdefConfig: grid_nodes must be >= 3");
  if (state_quantiles == 0 || noise_points == 0) {
    throw std::invalid_argument("PdefConfig: quantile and noise point counts must be >= 1");
  }
  if (!(width_factor > 0.0)) throw std::invalid_argument("PdefConfig: width_factor must be positive");
  if (!(initial_halfwidth_sd > 0.0)) throw std::invalid_argument("PdefConfig: initial_halfwidth_sd must be positive");
}

PdefState pdef_init(const ScalarStateModel& model, const PdefConfig& cfg) {
  model.validate();
  cfg.validate();
  const double mu = model.initial.mean;
  const double sd = std::sqrt(model.initial.variance);
  const Interval domain{mu - cfg.initial_halfwidth_sd * sd, mu + cfg.initial_halfwidth_sd * sd};
  SpectralGrid grid(cfg.order(), domain);
  std::vector<double> v(grid.size());
  const auto x = grid.nodes();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double z = (x[j] - mu) / sd;
    v[j] = std::exp(-0.5 * z * z);
  }
  return {normalize(GridDensity(std::move(grid), std::move(v)))};
}

GridDensity pdef_predict(const PdefState& state, const ScalarStateModel& model, const NoiseQuantization& noise,
                         int k, const PdefConfig& cfg) {
  auto branches = make_branches(state.posterior, noise, model, k, cfg.state_quantiles);
  const double q = model.process_noise.variance;
  const Interval domain = select_domain(branches, std::sqrt(q), cfg.order(), cfg.width_factor);
  const SpectralGrid grid(cfg.order(), domain);
  if (cfg.split_noise) {
    // Shrinking the noise only pulls end states inward, so the domain above
    // still covers every branch.
    for (auto& b : branches) {
      const double sigma = mollifier_sigma(grid, b.start_state, cfg.width_factor);
      b.noise_value *= std::sqrt(std::max(q - sigma * sigma, 0.0) / q);
      b.end_state = model.transition(b.start_state, k, b.noise_value);
      b.velocity = b.end_state - b.start_state;
    }
  }
  return assemble_prior(branches, grid, {cfg.width_factor, cfg.velocity_bins});
}

GridDensity bayes_update(const GridDensity& prior, const ScalarStateModel& model, int k, double y) {
  const double r = model.obs_noise.variance;
  if (!(r > 0.0)) throw std::invalid_argument("bayes_update: R must be positive");
  const auto x = prior.grid().nodes();
  const auto p = prior.values();

  std::vector<double> loglik(p.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double resid = y - model.observation(x[j], k);
    loglik[j] = -0.5 * resid * resid / r;
    if (p[j] > 0.0) peak = std::max(peak, loglik[j]);
  }
  if (!std::isfinite(peak)) throw FilterDivergence("prior has no mass on the grid");

  std::vector<double> post(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) post[j] = p[j] * std::exp(loglik[j] - peak);
  return normalize(GridDensity(prior.grid(), std::move(post)));
}

PdefState pdef_step(const PdefState& state, const ScalarStateModel& model, const NoiseQuantization& noise, int k,
                    double y, const PdefConfig& cfg) {
  return {bayes_update(pdef_predict(state, model, noise, k, cfg), model, k, y)};
}

// --- particle filter ---------------------------------------------------------

PfState pf_init(const ScalarStateModel& model, std::size_t count, Rng& rng) {
  model.validate();
  if (count == 0) throw std::invalid_argument("pf_init: particle count must be >= 1");
  std::normal_distribution<double> unit(0.0, 1.0);
  const double sd = std::sqrt(model.initial.variance);
  PfState s;
  s.particles.resize(count);
  for (double& x : s.particles) x = model.initial.mean + sd * unit(rng);
  s.weights.assign(count, 1.0 / static_cast<double>(count));
  return s;
}

std::vector<std::size_t> systematic_resample(std::span<const double> weights, std::size_t n_out, double u0) {
  if (weights.empty()) throw std::invalid_argument("systematic_resample: empty weights");
  if (!(u0 >= 0.0 && u0 < 1.0)) throw std::invalid_argument("systematic_resample: u0 must lie in [0, 1)");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("systematic_resample: weights must sum to 1");

  std::vector<std::size_t> idx;
  idx.reserve(n_out);
  const double step = 1.0 / static_cast<double>(n_out);
  std::size_t i = 0;
  double cumulative = weights[0];
  for (std::size_t m = 0; m < n_out; ++m) {
    const double u = (u0 + static_cast<double>(m)) * step;
    while (u >= cumulative && i + 1 < weights.size()) cumulative += weights[++i];
    idx.push_back(i);
  }
  return idx;
}

PfState pf_step(const PfState& state, const ScalarStateModel& model, int k, double y, Rng& rng) {
  const std::size_t n = state.particles.size();
  if (n == 0 || state.weights.size() != n) throw std::invalid_argument("pf_step: malformed particle state");
  std::normal_distribution<double> unit(0.0, 1.0);
  const double q_sd = std::sqrt(model.process_noise.variance);
  const double r = model.obs_noise.variance;

  std::vector<double> moved(n), logw(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    moved[i] = model.transition(state.particles[i], k, model.process_noise.mean + q_sd * unit(rng));
    const double resid = y - model.observation(moved[i], k);
    logw[i] = std::log(state.weights[i]) - 0.5 * resid * resid / r - 0.5 * std::log(2.0 * std::numbers::pi * r);
    peak = std::max(peak, logw[i]);
  }
  if (!(peak >= std::log(1e-300))) {
    throw WeightUnderflow("all particle likelihoods below 1e-300 at step " + std::to_string(k));
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(logw[i] - peak);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;

  const double u0 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto idx = systematic_resample(w, n, u0 < 1.0 ? u0 : 0.0);
  PfState out;
  out.particles.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.particles[i] = moved[idx[i]];
  out.weights.assign(n, 1.0 / static_cast<double>(n));
  return out;
}

// --- unscented Kalman filter -------------------------------------------------

UkfState ukf_init(const ScalarStateModel& model) {
  model.validate();
  return {model.initial.mean, model.initial.variance};
}

UkfState ukf_step(const UkfState& state, const ScalarStateModel& model, int k, double y, const UkfParams& params) {
  if (!(state.variance > 0.0)) throw std::invalid_argument("ukf_step: variance must be positive");
  constexpr double n = 1.0;
  const double lambda = params.alpha * params.alpha * (n + params.kappa) - n;
  const double wm0 = lambda / (n + lambda);
  const double wc0 = wm0 + 1.0 - params.alpha * params.alpha + params.beta;
  const double wi = 1.0 / (2.0 * (n + lambda));

  // Predict through the transition with additive process noise.
  double spread = std::sqrt((n + lambda) * state.variance);
  const double f0 = model.transition(state.mean, k, 0.0);
  const double fp = model.transition(state.mean + spread, k, 0.0);
  const double fm = model.transition(state.mean - spread, k, 0.0);
  const double m_pred = wm0 * f0 + wi * (fp + fm);
  const double p_pred = wc0 * (f0 - m_pred) * (f0 - m_pred) +
                        wi * ((fp - m_pred) * (fp - m_pred) + (fm - m_pred) * (fm - m_pred)) +
                        model.process_noise.variance;
  if (!(p_pred > 0.0)) throw FilterError("ukf_step: non-positive predicted variance");

  // Measurement update from sigma points redrawn around the prediction.
  spread = std::sqrt((n + lambda) * p_pred);
  const double xs[3] = {m_pred, m_pred + spread, m_pred - spread};
  const double ys[3] = {model.observation(xs[0], k), model.observation(xs[1], k), model.observation(xs[2], k)};
  const double y_pred = wm0 * ys[0] + wi * (ys[1] + ys[2]);
  const double s = wc0 * (ys[0] - y_pred) * (ys[0] - y_pred) +
                   wi * ((ys[1] - y_pred) * (ys[1] - y_pred) + (ys[2] - y_pred) * (ys[2] - y_pred)) +
                   model.obs_noise.variance;
  if (!(s > 0.0)) throw FilterError("ukf_step: non-positive innovation variance");
  const double cross = wc0 * (xs[0] - m_pred) * (ys[0] - y_pred) +
                       wi * ((xs[1] - m_pred) * (ys[1] - y_pred) + (xs[2] - m_pred) * (ys[2] - y_pred));
  const double gain = cross / s;
  return {m_pred + gain * (y - y_pred), std::max(p_pred - gain * gain * s, 1e-12)};
}

double estimate(const FilterState& state) {
  struct Visitor {
    double operator()(const PdefState& s) const { return mean(s.posterior); }
    double operator()(const PfState& s) const {
      return std::inner_product(s.particles.begin(), s.particles.end(), s.weights.begin(), 0.0);
    }
    double operator()(const UkfState& s) const { return s.mean; }
  };
  return std::visit(Visitor{}, state);
}

}  // namespace pdef
