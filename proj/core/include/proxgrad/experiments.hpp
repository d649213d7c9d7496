#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proxgrad/losses.hpp"
#include "proxgrad/solver.hpp"

namespace proxgrad {

enum class Family { logistic_l1, ls_l1l2 };

std::string to_string(Family family);
Family parse_family(const std::string& name);

struct InstanceDims {
  long m = 0;
  long n = 0;
  long s = 0;
};

/// One synthetic problem instance. Sizes default to (m, n, s) =
/// (100j, 1000j, 20j); `dims` overrides them for desk-scale runs.
struct InstanceSpec {
  Family family = Family::logistic_l1;
  int j = 1;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  std::optional<InstanceDims> dims;

  InstanceDims resolved_dims() const;
  void validate() const;
};

struct LogisticInstance {
  LogisticData data;     // C = [A, 1] with labels b
  Vector ground_truth;   // the s-sparse x used to draw the labels
};

struct L12Instance {
  LeastSquaresData data;  // unit-column Gaussian A with b = A x + 0.01 z
  Vector ground_truth;
};

/// Gaussian design, uniform s-support, Gaussian signal on the support, and
/// labels sign(A x + eps) for a single uniform eps, redrawn in the
/// (probability-zero) event that all labels coincide. Fully determined by
/// the seed: entries are drawn row by row, then the support, the signal,
/// and eps, in that order.
LogisticInstance gen_logistic_instance(const InstanceSpec& spec);

/// Gaussian design normalized to unit columns, s-sparse Gaussian signal,
/// b = A x + 0.01 z. Same deterministic draw order as above with z last.
L12Instance gen_l12_instance(const InstanceSpec& spec);

/// Time axis for evolution curves: wall-clock seconds, or cumulative
/// subproblem solves for the deterministic mode.
enum class TimeAxis { wall_seconds, prox_evals };

struct EvolutionCurve {
  std::vector<double> grid;
  std::vector<double> e_mean;
  std::vector<double> e_stderr;
  int trials = 0;
};

/// Normalized objective evolution. Per trial, e(k) = (F(x^k) - F_min) /
/// (F(x^0) - F_min) with F_min the best objective seen by any algorithm in
/// that trial; E(t) = min{e(k) : T(k) <= t}. Curves are averaged pointwise
/// across trials on the given grid. Throws if F(x^0) == F_min (all
/// algorithms started at the optimum) or the traces disagree on F(x^0).
std::map<std::string, EvolutionCurve> evolution_metric(
    const std::vector<std::map<std::string, RunTrace>>& trials,
    const std::vector<double>& grid, TimeAxis axis);

enum class Algo { pgels, npg, pg, fista, refista, pdcae };

std::string to_string(Algo algo);
Algo parse_algo(const std::string& name);

/// Extrapolation weight delta used by pgels when no override is given:
/// 0.1 for the logistic family, 0.9 for the l1-2 family.
double pgels_default_delta(Family family);

/// Instance materialized into solver inputs. `smooth` and `lambda` are kept
/// alongside the composite problem for the DC solver, which needs them
/// separately.
struct BuiltProblem {
  CompositeProblem problem;
  SmoothTerm smooth;
  double lambda = 0.0;
  Family family = Family::logistic_l1;
};

BuiltProblem build_problem(const InstanceSpec& spec);

/// Dispatches one named algorithm with the experiment defaults: pgels/npg
/// run the line-search solver (N=2, spectral mu, mu_0^0=1), pg/fista/refista
/// the fixed-step family (refista restarts every 200 iterations), pdcae the
/// DC solver (l1-2 family only).
RunTrace run_algo(Algo algo, const BuiltProblem& built, const Vector& x0,
                  const Budget& budget,
                  std::optional<double> delta_override = std::nullopt);

struct SuiteCell {
  Family family = Family::logistic_l1;
  int j = 1;
  double lambda = 1.0;
  std::optional<InstanceDims> dims;
};

/// Grid of benchmark cells. Exactly one of `tmax` (wall-clock mode) and
/// `work_budget` (deterministic mode, prox evaluations) must be set.
struct SuiteConfig {
  std::vector<SuiteCell> cells;
  std::vector<Algo> algos;
  int trials = 10;
  std::uint64_t seed = 0;
  std::optional<double> tmax;
  std::optional<long> work_budget;
  std::optional<double> delta_override;
  int grid_points = 200;
  std::string out_csv;
  std::string out_manifest;  // defaults to out_csv + ".manifest.json"
};

struct RunRecord {
  std::string algo;
  int trial = 0;
  std::string stop_reason;
  long iterations = 0;
  long prox_evals = 0;
  double final_f = 0.0;
  double wall_seconds = 0.0;
};

struct CellResult {
  SuiteCell cell;
  std::map<std::string, EvolutionCurve> curves;
  std::vector<RunRecord> runs;
  bool failed = false;
  std::vector<std::string> failures;
};

struct SuiteResult {
  std::vector<CellResult> cells;
  std::string csv_path;
  std::string manifest_path;
};

/// Runs every cell: per trial, generates one instance (seed + trial index),
/// starts every algorithm from the origin, computes the averaged evolution
/// curves, and writes the CSV and a JSON manifest. Per-run failures are
/// recorded in the manifest and flag the cell; they do not abort the suite.
SuiteResult run_benchmark(const SuiteConfig& config);

}  // namespace proxgrad
