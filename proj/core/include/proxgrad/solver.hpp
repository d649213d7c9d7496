#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxgrad/potential.hpp"
#include "proxgrad/problem.hpp"
#include "proxgrad/prox.hpp"

namespace proxgrad {

enum class BetaSchedule { zero, nesterov, nesterov_restart, constant };
enum class Mu0Schedule { constant, spectral };

enum class StopReason {
  iteration_budget,
  time_budget,
  work_budget,
  residual,
  stalled,  // acceptance failed at mu_max by less than evaluation noise
};

std::string to_string(StopReason reason);

/// Termination controls shared by all solvers. `max_prox_evals` counts
/// subproblem solves (one gradient + one prox application each), the
/// deterministic work unit used by the benchmark's deterministic mode.
/// `residual_tol`, when set, stops once the prox-gradient fixed-point
/// residual at mu = lipschitz_bound drops to the tolerance.
struct Budget {
  long max_iterations = 1000000;
  double max_seconds = infinity;
  std::optional<long> max_prox_evals;
  std::optional<double> residual_tol;
};

struct SolverConfig {
  LineSearchParams line_search;
  int window = 2;  // N: acceptance compares against the last N+1 merit values
  BetaSchedule beta_schedule = BetaSchedule::nesterov;
  double beta_constant = 0.0;           // used by BetaSchedule::constant
  Mu0Schedule mu0_schedule = Mu0Schedule::spectral;
  double mu0_initial = 1.0;             // mu_0^0, also the constant-schedule value
  std::optional<long> restart_interval; // Delta K for nesterov_restart
  Budget budget;
};

/// Everything about how iterate k was produced, enough to re-validate the
/// acceptance test and the inner-loop bound after the run. Row 0 describes
/// the starting point (mu_accepted = 1, beta_accepted = 0, step zero).
struct IterationRecord {
  long k = 0;
  double f_value = 0.0;       // F(x^k)
  double h_value = 0.0;       // merit entry for x^k
  double wall_time = 0.0;     // seconds since the solve started, 0 at k=0
  long prox_evals = 0;        // cumulative subproblem solves when x^k appeared
  int inner_count = 0;        // line-search attempts that produced x^k
  double step_norm = 0.0;     // ||x^k - x^{k-1}||
  double step_sq = 0.0;       // exact squared norm used by the acceptance test
  double mu_accepted = 1.0;   // accepted mu (mu_bar_{k-1})
  double beta_accepted = 0.0; // accepted beta
  double mu0 = 1.0;           // initial mu of the producing line search
  double beta0 = 0.0;         // initial beta of the producing line search
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  Vector final_x;
  StopReason stop_reason = StopReason::iteration_budget;
  double total_seconds = 0.0;
  long total_prox_evals = 0;
};

/// u = Prox_{P/mu}(y - grad_y/mu), the minimizer of
/// <grad_y, x - y> + (mu/2)||x - y||^2 + P(x).
Vector prox_grad_step(const Vector& y, const Vector& grad_y, double mu,
                      const ProxTerm& prox);

/// Extrapolation weight recurrence: beta = (t_prev - 1)/t_curr, then
/// t advances through t_next = (1 + sqrt(1 + 4 t_curr^2))/2.
struct NesterovState {
  double t_prev = 1.0;
  double t_curr = 1.0;
};
std::pair<double, NesterovState> nesterov_beta(const NesterovState& state);

/// Curvature-seeded initial step weight,
///   min{max{max{<dy,dg>/||dy||^2, 0.5*mu_bar_prev}, mu_min}, mu_max},
/// falling back to mu_bar_prev when y_k == y_prev.
double spectral_mu0(const Vector& y_k, const Vector& y_prev, const Vector& g_k,
                    const Vector& g_prev, double mu_bar_prev, double mu_min,
                    double mu_max);

/// Extrapolated proximal gradient with the non-monotone acceptance test.
/// With delta = 0 the merit reduces to F and the method is the classical
/// non-monotone proximal gradient; with delta = 0 and mu0 pinned at mu_max
/// it is a fixed-step proximal gradient that never shrinks.
/// Throws std::invalid_argument if x0 is outside dom P or the parameters are
/// inconsistent with the problem's Lipschitz bound, and std::logic_error if a
/// theoretical invariant fails at runtime.
RunTrace run_pgels(const CompositeProblem& problem, const SolverConfig& config,
                   const Vector& x0);

enum class FistaVariant { pg, fista, refista };

/// Fixed-step 1/L_f proximal gradient family: plain (pg, beta == 0),
/// accelerated (fista), and accelerated with restarts (refista, resetting the
/// t-sequence every `restart_interval` iterations or when
/// <y^k - x^{k+1}, x^{k+1} - x^k> > 0).
RunTrace run_fista(const CompositeProblem& problem, FistaVariant variant,
                   std::optional<long> restart_interval, const Vector& x0,
                   const Budget& budget);

/// Difference-of-convex splitting for f + lambda(||.||_1 - ||.||): linearizes
/// the concave part through xi^k in lambda * subdiff(||x^k||) (xi = 0 at the
/// origin), extrapolates with restarted Nesterov weights, and solves the
/// resulting l1 subproblem at step 1/L_f.
RunTrace run_pdcae(const SmoothTerm& smooth, const L1MinusL2Term& reg,
                   const Vector& x0, const Budget& budget,
                   long restart_interval = 200);

enum class RateModel { geometric, power };

struct RateFit {
  RateModel model = RateModel::geometric;
  double parameter = 0.0;  // ratio rho for geometric, exponent for power
  double quality = 0.0;    // R^2 of the better fit, in [0, 1]
};

/// Least-squares fit of log(gap) against k (geometric) and log k (power)
/// over the tail half of the sequence; returns the better-fitting model.
/// Gaps must be positive and number at least 10.
RateFit fit_rate(std::span<const double> gaps);

}  // namespace proxgrad
