#include "proxgrad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "proxgrad/potential.hpp"
#include "proxgrad/prox.hpp"
#include "proxgrad/rng.hpp"
#include "proxgrad/version.hpp"

namespace proxgrad {

namespace {

std::vector<long> sample_support(Rng& rng, long n, long s) {
  std::vector<long> indices(static_cast<std::size_t>(n));
  std::iota(indices.begin(), indices.end(), 0L);
  for (long i = 0; i < s; ++i) {
    const long j = i + static_cast<long>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
    std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
  }
  std::vector<long> support(indices.begin(), indices.begin() + s);
  std::sort(support.begin(), support.end());
  return support;
}

Matrix gaussian_matrix(Rng& rng, long m, long n) {
  Matrix a(m, n);
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < n; ++j) a(i, j) = rng.gaussian();
  }
  return a;
}

Vector sparse_gaussian(Rng& rng, long n, const std::vector<long>& support) {
  Vector x = Vector::Zero(n);
  for (const long i : support) x[i] = rng.gaussian();
  return x;
}

double record_time(const IterationRecord& row, TimeAxis axis) {
  return axis == TimeAxis::wall_seconds ? row.wall_time
                                        : static_cast<double>(row.prox_evals);
}

std::string format_g9(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.9g", v);
  return buffer;
}

}  // namespace

std::string to_string(Family family) {
  return family == Family::logistic_l1 ? "logistic-l1" : "ls-l1l2";
}

Family parse_family(const std::string& name) {
  if (name == "logistic-l1") return Family::logistic_l1;
  if (name == "ls-l1l2") return Family::ls_l1l2;
  throw std::invalid_argument("unknown family: " + name);
}

InstanceDims InstanceSpec::resolved_dims() const {
  if (dims) return *dims;
  return {100L * j, 1000L * j, 20L * j};
}

void InstanceSpec::validate() const {
  const InstanceDims d = resolved_dims();
  if (!dims && j < 1) throw std::invalid_argument("InstanceSpec: j must be at least 1");
  if (d.m < 1 || d.n < 1) throw std::invalid_argument("InstanceSpec: empty dimensions");
  if (d.s < 0 || d.s > d.n) throw std::invalid_argument("InstanceSpec: bad sparsity level");
  if (!(lambda > 0.0)) throw std::invalid_argument("InstanceSpec: lambda must be positive");
}

LogisticInstance gen_logistic_instance(const InstanceSpec& spec) {
  spec.validate();
  if (spec.family != Family::logistic_l1) {
    throw std::invalid_argument("gen_logistic_instance: family mismatch");
  }
  const InstanceDims d = spec.resolved_dims();
  Rng rng(spec.seed);
  const Matrix a = gaussian_matrix(rng, d.m, d.n);
  const std::vector<long> support = sample_support(rng, d.n, d.s);
  const Vector xhat = sparse_gaussian(rng, d.n, support);
  const Vector margins = a * xhat;

  Vector labels(d.m);
  bool ok = false;
  for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
    const double eps = rng.uniform01();
    bool any_pos = false, any_neg = false;
    for (long i = 0; i < d.m; ++i) {
      labels[i] = margins[i] + eps >= 0.0 ? 1.0 : -1.0;
      (labels[i] > 0.0 ? any_pos : any_neg) = true;
    }
    ok = any_pos && any_neg;
  }
  if (!ok) throw std::runtime_error("gen_logistic_instance: labels degenerate for this seed");

  Matrix c(d.m, d.n + 1);
  c.leftCols(d.n) = a;
  c.col(d.n).setOnes();
  return {LogisticData{std::move(c), std::move(labels)}, xhat};
}

L12Instance gen_l12_instance(const InstanceSpec& spec) {
  spec.validate();
  if (spec.family != Family::ls_l1l2) {
    throw std::invalid_argument("gen_l12_instance: family mismatch");
  }
  const InstanceDims d = spec.resolved_dims();
  Rng rng(spec.seed);
  Matrix a = gaussian_matrix(rng, d.m, d.n);
  for (long jcol = 0; jcol < d.n; ++jcol) {
    const double norm = a.col(jcol).norm();
    if (norm == 0.0) throw std::runtime_error("gen_l12_instance: zero column");
    a.col(jcol) /= norm;
  }
  const std::vector<long> support = sample_support(rng, d.n, d.s);
  const Vector xhat = sparse_gaussian(rng, d.n, support);
  Vector noise(d.m);
  for (long i = 0; i < d.m; ++i) noise[i] = rng.gaussian();
  Vector b = a * xhat + 0.01 * noise;
  return {LeastSquaresData{std::move(a), std::move(b)}, xhat};
}

std::map<std::string, EvolutionCurve> evolution_metric(
    const std::vector<std::map<std::string, RunTrace>>& trials,
    const std::vector<double>& grid, TimeAxis axis) {
  if (trials.empty()) throw std::invalid_argument("evolution_metric: no trials");
  if (grid.empty()) throw std::invalid_argument("evolution_metric: empty grid");

  // per algo, per trial, the E staircase sampled on the grid
  std::map<std::string, std::vector<std::vector<double>>> samples;

  for (const auto& trial : trials) {
    if (trial.empty()) throw std::invalid_argument("evolution_metric: empty trial");
    double f0 = trial.begin()->second.iterations.front().f_value;
    double f_min = infinity;
    for (const auto& [name, trace] : trial) {
      if (trace.iterations.empty()) {
        throw std::invalid_argument("evolution_metric: empty trace for " + name);
      }
      const double start = trace.iterations.front().f_value;
      if (!(std::abs(start - f0) <= 1e-9 * std::max(1.0, std::abs(f0)))) {
        throw std::invalid_argument("evolution_metric: traces do not share F(x0)");
      }
      for (const IterationRecord& row : trace.iterations) {
        f_min = std::min(f_min, row.f_value);
      }
    }
    const double denom = f0 - f_min;
    if (!(denom > 0.0)) {
      throw std::invalid_argument(
          "evolution_metric: degenerate benchmark, F(x0) equals the best objective");
    }

    for (const auto& [name, trace] : trial) {
      std::vector<double> curve(grid.size(), 1.0);
      std::size_t row_index = 0;
      double best = infinity;
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        while (row_index < trace.iterations.size() &&
               record_time(trace.iterations[row_index], axis) <= grid[gi]) {
          const double e = (trace.iterations[row_index].f_value - f_min) / denom;
          best = std::min(best, e);
          ++row_index;
        }
        curve[gi] = best == infinity ? 1.0 : std::min(best, 1.0);
      }
      samples[name].push_back(std::move(curve));
    }
  }

  std::map<std::string, EvolutionCurve> curves;
  for (auto& [name, per_trial] : samples) {
    EvolutionCurve curve;
    curve.grid = grid;
    curve.trials = static_cast<int>(per_trial.size());
    curve.e_mean.resize(grid.size());
    curve.e_stderr.resize(grid.size());
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      double sum = 0.0;
      for (const auto& trial_curve : per_trial) sum += trial_curve[gi];
      const double mean = sum / curve.trials;
      double varsum = 0.0;
      for (const auto& trial_curve : per_trial) {
        const double d = trial_curve[gi] - mean;
        varsum += d * d;
      }
      curve.e_mean[gi] = mean;
      curve.e_stderr[gi] =
          curve.trials > 1
              ? std::sqrt(varsum / (curve.trials - 1)) / std::sqrt(double(curve.trials))
              : 0.0;
    }
    curves.emplace(name, std::move(curve));
  }
  return curves;
}

std::string to_string(Algo algo) {
  switch (algo) {
    case Algo::pgels: return "pgels";
    case Algo::npg: return "npg";
    case Algo::pg: return "pg";
    case Algo::fista: return "fista";
    case Algo::refista: return "refista";
    case Algo::pdcae: return "pdcae";
  }
  return "unknown";
}

Algo parse_algo(const std::string& name) {
  if (name == "pgels") return Algo::pgels;
  if (name == "npg") return Algo::npg;
  if (name == "pg") return Algo::pg;
  if (name == "fista") return Algo::fista;
  if (name == "refista") return Algo::refista;
  if (name == "pdcae") return Algo::pdcae;
  throw std::invalid_argument("unknown algorithm: " + name);
}

double pgels_default_delta(Family family) {
  return family == Family::logistic_l1 ? 0.1 : 0.9;
}

BuiltProblem build_problem(const InstanceSpec& spec) {
  BuiltProblem built;
  built.lambda = spec.lambda;
  built.family = spec.family;
  if (spec.family == Family::logistic_l1) {
    LogisticInstance instance = gen_logistic_instance(spec);
    built.smooth = logistic_term(instance.data);
    built.problem = CompositeProblem{
        built.smooth, make_l1_term(L1Term{spec.lambda, true}), instance.data.C.cols()};
  } else {
    L12Instance instance = gen_l12_instance(spec);
    built.smooth = least_squares_term(instance.data);
    built.problem = CompositeProblem{
        built.smooth, make_l1_minus_l2_term(L1MinusL2Term{spec.lambda}),
        instance.data.A.cols()};
  }
  return built;
}

RunTrace run_algo(Algo algo, const BuiltProblem& built, const Vector& x0,
                  const Budget& budget, std::optional<double> delta_override) {
  switch (algo) {
    case Algo::pgels: {
      const double delta = delta_override.value_or(pgels_default_delta(built.family));
      SolverConfig config;
      config.line_search = default_line_search(built.smooth.lipschitz_bound, delta);
      config.beta_schedule = BetaSchedule::nesterov;
      config.mu0_schedule = Mu0Schedule::spectral;
      config.budget = budget;
      return run_pgels(built.problem, config, x0);
    }
    case Algo::npg: {
      SolverConfig config;
      config.line_search = default_line_search(built.smooth.lipschitz_bound, 0.0);
      config.beta_schedule = BetaSchedule::zero;
      config.mu0_schedule = Mu0Schedule::spectral;
      config.budget = budget;
      return run_pgels(built.problem, config, x0);
    }
    case Algo::pg:
      return run_fista(built.problem, FistaVariant::pg, std::nullopt, x0, budget);
    case Algo::fista:
      return run_fista(built.problem, FistaVariant::fista, std::nullopt, x0, budget);
    case Algo::refista:
      return run_fista(built.problem, FistaVariant::refista, 200, x0, budget);
    case Algo::pdcae: {
      if (built.family != Family::ls_l1l2) {
        throw std::invalid_argument("pdcae requires the ls-l1l2 family");
      }
      return run_pdcae(built.smooth, L1MinusL2Term{built.lambda}, x0, budget, 200);
    }
  }
  throw std::logic_error("run_algo: unreachable");
}

SuiteResult run_benchmark(const SuiteConfig& config) {
  if (config.cells.empty()) throw std::invalid_argument("run_benchmark: no cells");
  if (config.algos.empty()) throw std::invalid_argument("run_benchmark: no algorithms");
  if (config.trials < 1) throw std::invalid_argument("run_benchmark: trials must be positive");
  if (config.grid_points < 2) throw std::invalid_argument("run_benchmark: need at least 2 grid points");
  if (config.tmax.has_value() == config.work_budget.has_value()) {
    throw std::invalid_argument("run_benchmark: set exactly one of tmax and work budget");
  }
  if (config.out_csv.empty()) throw std::invalid_argument("run_benchmark: no output path");

  const TimeAxis axis =
      config.tmax ? TimeAxis::wall_seconds : TimeAxis::prox_evals;
  const double horizon =
      config.tmax ? *config.tmax : static_cast<double>(*config.work_budget);
  std::vector<double> grid(static_cast<std::size_t>(config.grid_points));
  for (int i = 0; i < config.grid_points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        horizon * static_cast<double>(i) / static_cast<double>(config.grid_points - 1);
  }

  Budget budget;
  if (config.tmax) budget.max_seconds = *config.tmax;
  if (config.work_budget) budget.max_prox_evals = *config.work_budget;

  SuiteResult result;
  for (const SuiteCell& cell : config.cells) {
    CellResult cell_result;
    cell_result.cell = cell;
    std::vector<std::map<std::string, RunTrace>> trials;
    for (int trial = 0; trial < config.trials; ++trial) {
      InstanceSpec spec{cell.family, cell.j, cell.lambda, config.seed + static_cast<std::uint64_t>(trial),
                        cell.dims};
      std::map<std::string, RunTrace> traces;
      bool trial_ok = true;
      try {
        const BuiltProblem built = build_problem(spec);
        const Vector x0 = Vector::Zero(built.problem.dimension);
        for (const Algo algo : config.algos) {
          RunTrace trace = run_algo(algo, built, x0, budget, config.delta_override);
          RunRecord record;
          record.algo = to_string(algo);
          record.trial = trial;
          record.stop_reason = to_string(trace.stop_reason);
          record.iterations = static_cast<long>(trace.iterations.size()) - 1;
          record.prox_evals = trace.total_prox_evals;
          record.final_f = trace.iterations.back().f_value;
          record.wall_seconds = trace.total_seconds;
          cell_result.runs.push_back(record);
          traces.emplace(to_string(algo), std::move(trace));
        }
      } catch (const std::exception& error) {
        trial_ok = false;
        cell_result.failed = true;
        cell_result.failures.push_back("trial " + std::to_string(trial) + ": " + error.what());
      }
      if (trial_ok) trials.push_back(std::move(traces));
    }
    if (!trials.empty()) {
      cell_result.curves = evolution_metric(trials, grid, axis);
    }
    result.cells.push_back(std::move(cell_result));
  }

  // CSV: one row per cell x algorithm x grid point, 9 significant digits
  const std::filesystem::path csv_path(config.out_csv);
  if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("run_benchmark: cannot open " + config.out_csv);
  csv << "family,j,lambda,algo,trial_count,t,E_mean,E_stderr\n";
  for (const CellResult& cell_result : result.cells) {
    for (const Algo algo : config.algos) {
      const auto it = cell_result.curves.find(to_string(algo));
      if (it == cell_result.curves.end()) continue;  // failed cell, flagged in the manifest
      const EvolutionCurve& curve = it->second;
      for (std::size_t gi = 0; gi < curve.grid.size(); ++gi) {
        csv << to_string(cell_result.cell.family) << ',' << cell_result.cell.j << ','
            << format_g9(cell_result.cell.lambda) << ',' << to_string(algo) << ','
            << curve.trials << ',' << format_g9(curve.grid[gi]) << ','
            << format_g9(curve.e_mean[gi]) << ',' << format_g9(curve.e_stderr[gi]) << '\n';
      }
    }
  }
  csv.close();

  nlohmann::json manifest;
  manifest["library_version"] = version_string;
  manifest["seed"] = config.seed;
  manifest["trials"] = config.trials;
  manifest["grid_points"] = config.grid_points;
  manifest["mode"] = axis == TimeAxis::wall_seconds ? "wall" : "deterministic";
  if (config.tmax) manifest["tmax_seconds"] = *config.tmax;
  if (config.work_budget) manifest["work_budget_prox_evals"] = *config.work_budget;
  if (config.delta_override) manifest["delta_override"] = *config.delta_override;
  manifest["algos"] = nlohmann::json::array();
  for (const Algo algo : config.algos) manifest["algos"].push_back(to_string(algo));
  manifest["cells"] = nlohmann::json::array();
  for (const CellResult& cell_result : result.cells) {
    nlohmann::json cell_json;
    cell_json["family"] = to_string(cell_result.cell.family);
    cell_json["j"] = cell_result.cell.j;
    cell_json["lambda"] = cell_result.cell.lambda;
    if (cell_result.cell.dims) {
      cell_json["dims"] = {cell_result.cell.dims->m, cell_result.cell.dims->n,
                           cell_result.cell.dims->s};
    }
    cell_json["failed"] = cell_result.failed;
    cell_json["failures"] = cell_result.failures;
    cell_json["runs"] = nlohmann::json::array();
    for (const RunRecord& record : cell_result.runs) {
      cell_json["runs"].push_back({{"algo", record.algo},
                                   {"trial", record.trial},
                                   {"stop_reason", record.stop_reason},
                                   {"iterations", record.iterations},
                                   {"prox_evals", record.prox_evals},
                                   {"final_f", record.final_f},
                                   {"wall_seconds", record.wall_seconds}});
    }
    manifest["cells"].push_back(std::move(cell_json));
  }

  result.csv_path = config.out_csv;
  result.manifest_path =
      config.out_manifest.empty() ? config.out_csv + ".manifest.json" : config.out_manifest;
  std::ofstream manifest_file(result.manifest_path, std::ios::binary);
  if (!manifest_file) {
    throw std::runtime_error("run_benchmark: cannot open " + result.manifest_path);
  }
  manifest_file << manifest.dump(2) << '\n';
  return result;
}

}  // namespace proxgrad
