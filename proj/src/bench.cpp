#include "pdef/bench.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pdef/errors.hpp"

namespace pdef {

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::ukf: return "ukf";
    case FilterKind::pf: return "pf";
    case FilterKind::pdef: return "pdef";
  }
  return "?";
}

std::vector<FilterKind> parse_filters(const std::string& name) {
  if (name == "all") return {FilterKind::ukf, FilterKind::pf, FilterKind::pdef};
  if (name == "ukf") return {FilterKind::ukf};
  if (name == "pf") return {FilterKind::pf};
  if (name == "pdef") return {FilterKind::pdef};
  throw std::invalid_argument("unknown filter '" + name + "'");
}

ScalarStateModel benchmark_model() {
  ScalarStateModel m;
  m.transition = [](double x, int k, double v) {
    return 0.5 * x + 25.0 * x / (1.0 + x * x) + 8.0 * std::cos(1.2 * k) + v;
  };
  m.observation = [](double x, int) { return x * x / 20.0; };
  m.process_noise = {0.0, 10.0};
  m.obs_noise = {0.0, 1.0};
  m.initial = {0.0, 10.0};
  return m;
}

std::vector<TruthSample> simulate_truth(const ScalarStateModel& model, std::size_t steps, Rng& rng) {
  if (steps == 0) throw std::invalid_argument("simulate_truth: steps must be >= 1");
  if (model.process_noise.variance < 0.0 || model.obs_noise.variance < 0.0 || model.initial.variance < 0.0) {
    throw std::invalid_argument("simulate_truth: variances must be >= 0");
  }
  std::normal_distribution<double> unit(0.0, 1.0);
  const double q_sd = std::sqrt(model.process_noise.variance);
  const double r_sd = std::sqrt(model.obs_noise.variance);

  double x = model.initial.mean + std::sqrt(model.initial.variance) * unit(rng);
  std::vector<TruthSample> out;
  out.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    const int kk = static_cast<int>(k);
    x = model.transition(x, kk, model.process_noise.mean + q_sd * unit(rng));
    const double y = model.observation(x, kk) + model.obs_noise.mean + r_sd * unit(rng);
    out.push_back({x, y});
  }
  return out;
}

double rmse(std::span<const double> truth, std::span<const double> estimates) {
  if (truth.empty() || truth.size() != estimates.size()) {
    throw std::invalid_argument("rmse: inputs must be nonempty and of equal length");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) s += (estimates[i] - truth[i]) * (estimates[i] - truth[i]);
  return std::sqrt(s / static_cast<double>(truth.size()));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(master) ^ run) ^ stream);
}

void ExperimentConfig::validate() const {
  if (filters.empty()) throw std::invalid_argument("no filters requested");
  if (steps == 0 || runs == 0) throw std::invalid_argument("steps and runs must be >= 1");
  if (particles == 0) throw std::invalid_argument("particles must be >= 1");
  pdef.validate();
  model.validate();
}

RunTrace run_single(const ExperimentConfig& cfg, std::size_t run) {
  Rng truth_rng(derive_seed(cfg.seed, run, 0));
  const auto truth = simulate_truth(cfg.model, cfg.steps, truth_rng);

  RunTrace trace;
  trace.records.resize(cfg.steps);
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    trace.records[i].k = i + 1;
    trace.records[i].truth = truth[i].state;
    trace.records[i].observation = truth[i].observation;
  }
  std::vector<double> xs(cfg.steps);
  for (std::size_t i = 0; i < cfg.steps; ++i) xs[i] = truth[i].state;

  for (FilterKind kind : cfg.filters) {
    RunOutcome outcome{run, kind, false, 0.0, {}};
    std::vector<double> est;
    est.reserve(cfg.steps);
    try {
      switch (kind) {
        case FilterKind::ukf: {
          UkfState s = ukf_init(cfg.model);
          for (std::size_t i = 0; i < cfg.steps; ++i) {
            s = ukf_step(s, cfg.model, static_cast<int>(i + 1), truth[i].observation, cfg.ukf);
            est.push_back(estimate(s));
          }
          break;
        }
        case FilterKind::pf: {
          Rng rng(derive_seed(cfg.seed, run, 1));
          PfState s = pf_init(cfg.model, cfg.particles, rng);
          for (std::size_t i = 0; i < cfg.steps; ++i) {
            s = pf_step(s, cfg.model, static_cast<int>(i + 1), truth[i].observation, rng);
            est.push_back(estimate(s));
          }
          break;
        }
        case FilterKind::pdef: {
          const auto noise = gaussian_quantile_points(cfg.pdef.noise_points, cfg.model.process_noise.variance);
          PdefState s = pdef_init(cfg.model, cfg.pdef);
          for (std::size_t i = 0; i < cfg.steps; ++i) {
            s = pdef_step(s, cfg.model, noise, static_cast<int>(i + 1), truth[i].observation, cfg.pdef);
            est.push_back(estimate(s));
          }
          break;
        }
      }
      outcome.ok = true;
      outcome.rmse = rmse(xs, est);
      for (std::size_t i = 0; i < cfg.steps; ++i) {
        auto& rec = trace.records[i];
        (kind == FilterKind::ukf ? rec.ukf : kind == FilterKind::pf ? rec.pf : rec.pdef) = est[i];
      }
    } catch (const FilterError& e) {
      outcome.reason = e.what();
    }
    trace.outcomes.push_back(std::move(outcome));
  }
  return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    auto trace = run_single(cfg, r);
    for (auto& o : trace.outcomes) result.outcomes.push_back(std::move(o));
  }

  for (FilterKind kind : cfg.filters) {
    RmseReport rep;
    rep.filter = kind;
    rep.steps = cfg.steps;
    rep.run_count = cfg.runs;
    for (const auto& o : result.outcomes) {
      if (o.filter != kind) continue;
      if (o.ok) {
        rep.per_run.push_back(o.rmse);
      } else {
        rep.failures.push_back("run " + std::to_string(o.run) + ": " + o.reason);
      }
    }
    rep.runs_ok = rep.per_run.size();
    rep.runs_failed = rep.failures.size();
    if (!rep.per_run.empty()) {
      const double n = static_cast<double>(rep.per_run.size());
      rep.mean = std::accumulate(rep.per_run.begin(), rep.per_run.end(), 0.0) / n;
      if (rep.per_run.size() > 1) {
        double ss = 0.0;
        for (double v : rep.per_run) ss += (v - rep.mean) * (v - rep.mean);
        rep.stddev = std::sqrt(ss / (n - 1.0));
      }
    } else {
      rep.mean = std::nan("");
      rep.stddev = std::nan("");
    }
    result.reports.push_back(std::move(rep));
  }
  return result;
}

std::string config_line(const std::string& command, const ExperimentConfig& cfg) {
  std::string filter;
  if (cfg.filters.size() == 3) {
    filter = "all";
  } else {
    for (std::size_t i = 0; i < cfg.filters.size(); ++i) filter += (i ? "+" : "") + to_string(cfg.filters[i]);
  }
  std::ostringstream os;
  os << "# config: command=" << command << " filter=" << filter << " steps=" << cfg.steps << " runs=" << cfg.runs
     << " particles=" << cfg.particles << " grid=" << cfg.pdef.grid_nodes
     << " state_quantiles=" << cfg.pdef.state_quantiles << " noise_points=" << cfg.pdef.noise_points
     << " velocity_bins=" << cfg.pdef.velocity_bins << " width_factor=" << format_number(cfg.pdef.width_factor)
     << " noise_split=" << (cfg.pdef.split_noise ? 1 : 0) << " seed=" << cfg.seed;
  return os.str();
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void write_summary_csv(std::ostream& os, const std::string& header, const ExperimentResult& result) {
  os << header << '\n' << "filter,runs_ok,runs_failed,steps,mean_rmse,std_rmse\n";
  for (const auto& r : result.reports) {
    os << to_string(r.filter) << ',' << r.runs_ok << ',' << r.runs_failed << ',' << r.steps << ','
       << (r.runs_ok ? format_number(r.mean) : "") << ',' << (r.runs_ok ? format_number(r.stddev) : "") << '\n';
  }
}

void write_runs_csv(std::ostream& os, const std::string& header, const ExperimentResult& result) {
  os << header << '\n' << "run,filter,status,rmse,reason\n";
  for (const auto& o : result.outcomes) {
    std::string reason = o.reason;
    for (char& c : reason) {
      if (c == ',' || c == '\n') c = ';';
    }
    os << o.run << ',' << to_string(o.filter) << ',' << (o.ok ? "ok" : "failed") << ','
       << (o.ok ? format_number(o.rmse) : "") << ',' << reason << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const std::string& header, const std::vector<TrajectoryRecord>& records) {
  auto field = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  os << header << '\n' << "k,truth,observation,ukf,pf,pdef\n";
  for (const auto& r : records) {
    os << r.k << ',' << format_number(r.truth) << ',' << format_number(r.observation) << ',' << field(r.ukf) << ','
       << field(r.pf) << ',' << field(r.pdef) << '\n';
  }
}

}  // namespace pdef
