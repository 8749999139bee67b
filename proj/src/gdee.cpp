#include "pdef/gdee.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pdef/errors.hpp"

namespace pdef {

namespace {

constexpr double kSupportThreshold = 1e-12;
constexpr double kMassFloor = 1e-300;

void check_support(const SpectralGrid& grid, std::span<const double> values, double shift,
                   const std::string& label, double threshold = kSupportThreshold) {
  const double peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) return;
  const double cut = threshold * peak;
  std::size_t first = 0, last = values.size() - 1;
  while (first < last && values[first] <= cut) ++first;
  while (last > first && values[last] <= cut) --last;

  const auto x = grid.nodes();
  const std::size_t n = grid.order();
  const double left_guard = grid.domain().lo + 2.0 * (x[1] - x[0]);
  const double right_guard = grid.domain().hi - 2.0 * (x[n] - x[n - 1]);
  const double lo = x[first] + shift, hi = x[last] + shift;
  if (lo < left_guard || hi > right_guard) {
    throw SupportError(label + ": shifted support [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "] leaves the boundary margin of [" + std::to_string(grid.domain().lo) + ", " +
                       std::to_string(grid.domain().hi) + "]; widen the domain");
  }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

GridDensity::GridDensity(SpectralGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("GridDensity: length mismatch");
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("GridDensity: values must be finite and >= 0");
  }
}

double integrate(const GridDensity& density) { return density.grid().integrate(density.values()); }

double mean(const GridDensity& density) {
  const auto w = density.grid().physical_weights();
  const auto x = density.grid().nodes();
  const auto p = density.values();
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    m0 += w[j] * p[j];
    m1 += w[j] * p[j] * x[j];
  }
  return m1 / m0;
}

double variance(const GridDensity& density) {
  const double mu = mean(density);
  const auto w = density.grid().physical_weights();
  const auto x = density.grid().nodes();
  const auto p = density.values();
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    m0 += w[j] * p[j];
    m2 += w[j] * p[j] * (x[j] - mu) * (x[j] - mu);
  }
  return m2 / m0;
}

GridDensity normalize(const GridDensity& density) {
  const double mass = integrate(density);
  if (!(mass > kMassFloor)) {
    throw FilterDivergence("density mass " + std::to_string(mass) + " is below the normalization threshold");
  }
  std::vector<double> v(density.values().begin(), density.values().end());
  for (double& x : v) x /= mass;
  return GridDensity(density.grid(), std::move(v));
}

double mollifier_sigma(const SpectralGrid& grid, double center, double width_factor) {
  if (!(width_factor > 0.0)) throw std::invalid_argument("mollifier width_factor must be positive");
  return width_factor * grid.local_spacing(center);
}

std::vector<double> gaussian_bump(const SpectralGrid& grid, double center, double sigma) {
  const auto& d = grid.domain();
  if (!(center > d.lo && center < d.hi)) throw std::domain_error("gaussian_bump: center not inside domain");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_bump: sigma must be positive");
  std::vector<double> v(grid.size());
  const auto x = grid.nodes();
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double z = (x[j] - center) / sigma;
    v[j] = std::exp(-0.5 * z * z);
  }
  const double mass = grid.integrate(v);
  for (double& y : v) y /= mass;
  return v;
}

GridDensity mollified_delta(const SpectralGrid& grid, double center, double width_factor) {
  return GridDensity(grid, gaussian_bump(grid, center, mollifier_sigma(grid, center, width_factor)));
}

DenseMatrix advection_propagator(std::size_t order, double reference_shift) {
  const std::size_t n = order + 1;
  if (reference_shift == 0.0) return DenseMatrix::identity(n);

  const DenseMatrix d = diff_matrix(order);
  const std::size_t inflow = reference_shift > 0.0 ? 0 : order;
  DenseMatrix reduced(n - 1, n - 1);
  for (std::size_t i = 0, ri = 0; i < n; ++i) {
    if (i == inflow) continue;
    for (std::size_t j = 0, rj = 0; j < n; ++j) {
      if (j == inflow) continue;
      reduced(ri, rj++) = -reference_shift * d(i, j);
    }
    ++ri;
  }
  const DenseMatrix e = expm(reduced);

  DenseMatrix full(n, n);
  for (std::size_t i = 0, ri = 0; i < n; ++i) {
    if (i == inflow) continue;
    for (std::size_t j = 0, rj = 0; j < n; ++j) {
      if (j == inflow) continue;
      full(i, j) = e(ri, rj++);
    }
    ++ri;
  }
  return full;
}

void tie_and_clip(std::span<double> values) {
  if (values.empty()) return;
  const double avg = 0.5 * (values.front() + values.back());
  values.front() = values.back() = avg;
  for (double& v : values) v = std::max(v, 0.0);
}

GridDensity advect_step(const GridDensity& density, double velocity, double dt, double support_threshold) {
  if (!std::isfinite(velocity)) throw std::invalid_argument("advect_step: velocity must be finite");
  if (!(dt > 0.0)) throw std::invalid_argument("advect_step: dt must be positive");
  const double shift = velocity * dt;
  if (shift == 0.0) return density;

  const auto& grid = density.grid();
  check_support(grid, density.values(), shift, "advect_step", support_threshold);
  const DenseMatrix e = advection_propagator(grid.order(), shift * affine_scale(grid.domain()));
  auto out = matvec(e, density.values());
  tie_and_clip(out);
  return GridDensity(grid, std::move(out));
}

std::vector<double> density_quantiles(const GridDensity& density, std::size_t count) {
  if (count == 0) throw std::invalid_argument("density_quantiles: count must be >= 1");
  const auto cdf = integrate_coefficients(chebyshev_coefficients(density.values()));
  const double total = clenshaw(cdf, 1.0);
  if (!(total * 0.5 * density.grid().domain().width() > kMassFloor)) {
    throw FilterDivergence("cannot take quantiles of a density without mass");
  }

  std::vector<double> q(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double target = (static_cast<double>(i) + 0.5) / static_cast<double>(count) * total;
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (clenshaw(cdf, mid) < target ? lo : hi) = mid;
    }
    q[i] = affine_unmap(density.grid().domain(), 0.5 * (lo + hi));
  }
  return q;
}

std::vector<Branch> make_branches(const GridDensity& posterior, const NoiseQuantization& noise,
                                  const ScalarStateModel& model, int k, std::size_t state_quantiles) {
  noise.validate();
  if (state_quantiles == 0) throw std::invalid_argument("make_branches: state_quantiles must be >= 1");
  const auto starts = density_quantiles(posterior, state_quantiles);
  const double share = 1.0 / static_cast<double>(state_quantiles);

  std::vector<Branch> out;
  out.reserve(starts.size() * noise.points.size());
  for (double x0 : starts) {
    for (std::size_t q = 0; q < noise.points.size(); ++q) {
      Branch b;
      b.start_state = x0;
      b.noise_value = noise.points[q];
      b.mass = share * noise.weights[q];
      b.end_state = model.transition(x0, k, b.noise_value);
      b.velocity = b.end_state - b.start_state;
      out.push_back(b);
    }
  }
  return out;
}

Interval select_domain(std::span<const Branch> branches, double noise_std, std::size_t order,
                       double width_factor) {
  if (branches.empty()) throw std::invalid_argument("select_domain: no branches");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("select_domain: noise_std must be >= 0");
  double lo = branches.front().start_state, hi = lo;
  for (const auto& b : branches) {
    lo = std::min({lo, b.start_state, b.end_state});
    hi = std::max({hi, b.start_state, b.end_state});
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw FilterDivergence("non-finite branch state");

  // sigma at the grid centre is kappa * width.
  const double kappa = width_factor * std::numbers::pi / (2.0 * static_cast<double>(order));
  if (!(16.0 * kappa < 1.0)) {
    throw std::invalid_argument("select_domain: grid order too low for the mollifier width factor");
  }
  const double span = hi - lo;
  const double width_noise = (span + 8.0 * noise_std) / (1.0 - 8.0 * kappa);
  const double width_sigma = span / (1.0 - 16.0 * kappa);
  double width = std::max(width_noise, width_sigma);
  const double mid = 0.5 * (lo + hi);
  width = std::max(width, 1e-9 * (1.0 + std::abs(mid)));
  return {mid - 0.5 * width, mid + 0.5 * width};
}

GridDensity assemble_prior(std::span<const Branch> branches, const SpectralGrid& grid,
                           const PriorOptions& options) {
  if (branches.empty()) throw std::invalid_argument("assemble_prior: no branches");
  double total_mass = 0.0;
  for (const auto& b : branches) total_mass += b.mass;
  if (std::abs(total_mass - 1.0) > 1e-9) {
    throw std::invalid_argument("assemble_prior: branch masses must sum to 1");
  }

  const std::size_t n = grid.size();
  const double scale = affine_scale(grid.domain());
  std::vector<double> acc(n, 0.0);
  auto label = [](std::size_t i) { return "branch " + std::to_string(i); };

  if (options.velocity_bins == 0) {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const auto& b = branches[i];
      auto delta = mollified_delta(grid, b.start_state, options.width_factor);
      try {
        auto moved = advect_step(delta, b.velocity, 1.0);
        axpy(b.mass, moved.values(), acc);
      } catch (const SupportError& e) {
        throw SupportError(label(i) + " (" + e.what() + ")");
      }
    }
    tie_and_clip(acc);
    return normalize(GridDensity(grid, std::move(acc)));
  }

  // Bins hold equally spaced speeds s_b = s_0 + b*delta, so
  // exp(-s_b L) = exp(-s_0 L) exp(-delta L)^b and the sum over bins is a
  // Horner recursion in exp(-delta L). The offset of a branch from its bin
  // centre is absorbed by moving its delta before transport.
  std::vector<std::size_t> forward, backward;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    if (b.velocity > 0.0) {
      forward.push_back(i);
    } else if (b.velocity < 0.0) {
      backward.push_back(i);
    } else {
      const double sigma = mollifier_sigma(grid, b.start_state, options.width_factor);
      axpy(b.mass, gaussian_bump(grid, b.start_state, sigma), acc);
    }
  }

  auto speed_range = [&](const std::vector<std::size_t>& idx) {
    double lo = std::abs(branches[idx.front()].velocity), hi = lo;
    for (auto i : idx) {
      lo = std::min(lo, std::abs(branches[i].velocity));
      hi = std::max(hi, std::abs(branches[i].velocity));
    }
    return std::pair{lo, hi};
  };

  std::size_t bins_fwd = options.velocity_bins, bins_bwd = options.velocity_bins;
  if (!forward.empty() && !backward.empty()) {
    const auto [flo, fhi] = speed_range(forward);
    const auto [blo, bhi] = speed_range(backward);
    const double rf = fhi - flo, rb = bhi - blo;
    const double share = (rf + rb > 0.0) ? rf / (rf + rb) : 0.5;
    const auto total = static_cast<double>(options.velocity_bins);
    bins_fwd = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(total * share)), 1,
                                       std::max<std::size_t>(options.velocity_bins, 2) - 1);
    bins_bwd = std::max<std::size_t>(options.velocity_bins > bins_fwd ? options.velocity_bins - bins_fwd : 1, 1);
  }

  auto transport = [&](const std::vector<std::size_t>& idx, std::size_t bins, double direction) {
    if (idx.empty()) return;
    const auto [smin, smax] = speed_range(idx);
    if (smax == smin) bins = 1;
    const double width = (smax - smin) / static_cast<double>(bins);

    std::vector<std::vector<double>> slots(bins, std::vector<double>(n, 0.0));
    for (auto i : idx) {
      const auto& b = branches[i];
      const double speed = std::abs(b.velocity);
      std::size_t slot = 0;
      if (width > 0.0) {
        slot = std::min(bins - 1, static_cast<std::size_t>((speed - smin) / width));
      }
      const double center_speed = smin + (static_cast<double>(slot) + 0.5) * width;
      const double offset = direction * (speed - center_speed);
      const double sigma = mollifier_sigma(grid, b.start_state, options.width_factor);
      const auto bump = gaussian_bump(grid, b.start_state + offset, sigma);
      try {
        check_support(grid, bump, direction * center_speed, "advect_step");
      } catch (const SupportError& e) {
        throw SupportError(label(i) + " (" + e.what() + ")");
      }
      axpy(b.mass, bump, slots[slot]);
    }

    std::vector<double> horner = slots[bins - 1];
    if (bins > 1) {
      const DenseMatrix stride = advection_propagator(grid.order(), direction * width * scale);
      for (std::size_t s = bins - 1; s-- > 0;) {
        horner = matvec(stride, horner);
        axpy(1.0, slots[s], horner);
      }
    }
    const double first_center = smin + 0.5 * width;
    const DenseMatrix base = advection_propagator(grid.order(), direction * first_center * scale);
    auto moved = matvec(base, horner);
    tie_and_clip(moved);
    axpy(1.0, moved, acc);
  };

  transport(forward, bins_fwd, 1.0);
  transport(backward, bins_bwd, -1.0);
  tie_and_clip(acc);
  return normalize(GridDensity(grid, std::move(acc)));
}

}  // namespace pdef
