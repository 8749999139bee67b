#pragma once

// The univariate nonstationary growth benchmark
//   x_k = x_{k-1}/2 + 25 x_{k-1}/(1 + x_{k-1}^2) + 8 cos(1.2 k) + v_{k-1}
//   y_k = x_k^2 / 20 + n_k,          Q = 10, R = 1
// plus truth simulation, RMSE, a seeded multi-run harness and CSV output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdef/filters.hpp"
#include "pdef/model.hpp"

namespace pdef {

enum class FilterKind { ukf, pf, pdef };

/// "ukf", "pf", "pdef".
std::string to_string(FilterKind kind);
/// Accepts the names above; "all" expands to every filter. Throws
/// std::invalid_argument otherwise.
std::vector<FilterKind> parse_filters(const std::string& name);

ScalarStateModel benchmark_model();

struct TruthSample {
  double state = 0.0;
  double observation = 0.0;
};

/// x_0 from model.initial, then x_k and y_k for k = 1..steps with fresh noise
/// draws. Zero variances are allowed here and give noiseless samples.
std::vector<TruthSample> simulate_truth(const ScalarStateModel& model, std::size_t steps, Rng& rng);

double rmse(std::span<const double> truth, std::span<const double> estimates);

/// Stable per-run stream seed; independent of which filters run.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream);

struct ExperimentConfig {
  std::vector<FilterKind> filters{FilterKind::ukf, FilterKind::pf, FilterKind::pdef};
  std::size_t steps = 50;
  std::size_t runs = 50;
  std::size_t particles = 100;
  PdefConfig pdef{};
  UkfParams ukf{};
  std::uint64_t seed = 42;
  ScalarStateModel model = benchmark_model();

  void validate() const;
};

struct TrajectoryRecord {
  std::size_t k = 0;
  double truth = 0.0;
  double observation = 0.0;
  std::optional<double> ukf, pf, pdef;
};

struct RunOutcome {
  std::size_t run = 0;
  FilterKind filter = FilterKind::ukf;
  bool ok = false;
  double rmse = 0.0;
  std::string reason;
};

struct RmseReport {
  FilterKind filter = FilterKind::ukf;
  std::vector<double> per_run;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t runs_ok = 0;
  std::size_t runs_failed = 0;
  std::size_t run_count = 0;
  std::size_t steps = 0;
  std::vector<std::string> failures;
};

struct ExperimentResult {
  std::vector<RmseReport> reports;
  std::vector<RunOutcome> outcomes;
};

/// One truth trajectory (truth stream of derive_seed(seed, run, 0)) with
/// every requested filter run on its observations. A filter that fails
/// leaves its estimates empty and sets failure.
struct RunTrace {
  std::vector<TrajectoryRecord> records;
  std::vector<RunOutcome> outcomes;
};
RunTrace run_single(const ExperimentConfig& cfg, std::size_t run);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// "# config: key=value ..." header line, without the newline.
std::string config_line(const std::string& command, const ExperimentConfig& cfg);

/// Six significant digits.
std::string format_number(double x);

void write_summary_csv(std::ostream& os, const std::string& header, const ExperimentResult& result);
void write_runs_csv(std::ostream& os, const std::string& header, const ExperimentResult& result);
void write_trajectory_csv(std::ostream& os, const std::string& header,
                          const std::vector<TrajectoryRecord>& records);

}  // namespace pdef
