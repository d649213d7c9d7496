#include "proxgrad/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace proxgrad {

namespace {

constexpr int kInnerCap = 100;

class StopClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double finite_objective_at_start(const CompositeProblem& problem, const Vector& x0,
                                 const char* where) {
  detail::require_dimension(problem, x0, where);
  const double f0 = objective_value(problem, x0);
  if (f0 == infinity) {
    throw std::invalid_argument(std::string(where) + ": x0 lies outside dom P");
  }
  return f0;
}

struct LinearFit {
  double slope = 0.0;
  double r2 = 0.0;
};

LinearFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double ss_res = syy - (sxx > 0.0 ? sxy * sxy / sxx : 0.0);
  if (syy <= 1e-24 * n) {
    fit.r2 = ss_res <= 1e-24 * n ? 1.0 : 0.0;
  } else {
    fit.r2 = clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

}  // namespace

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::iteration_budget: return "iteration_budget";
    case StopReason::time_budget: return "time_budget";
    case StopReason::work_budget: return "work_budget";
    case StopReason::residual: return "residual";
    case StopReason::stalled: return "stalled";
  }
  return "unknown";
}

Vector prox_grad_step(const Vector& y, const Vector& grad_y, double mu,
                      const ProxTerm& prox) {
  if (!(mu > 0.0)) throw std::invalid_argument("prox_grad_step: mu must be positive");
  return prox.prox(y - grad_y / mu, 1.0 / mu);
}

std::pair<double, NesterovState> nesterov_beta(const NesterovState& state) {
  const double beta = (state.t_prev - 1.0) / state.t_curr;
  NesterovState next{state.t_curr,
                     0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.t_curr * state.t_curr))};
  return {beta, next};
}

double spectral_mu0(const Vector& y_k, const Vector& y_prev, const Vector& g_k,
                    const Vector& g_prev, double mu_bar_prev, double mu_min,
                    double mu_max) {
  const Vector dy = y_k - y_prev;
  const double dy_sq = dy.squaredNorm();
  if (dy_sq == 0.0) return mu_bar_prev;  // continuity with the previous accepted value
  const double raw = dy.dot(g_k - g_prev) / dy_sq;
  return std::min(std::max(std::max(raw, 0.5 * mu_bar_prev), mu_min), mu_max);
}

RunTrace run_pgels(const CompositeProblem& problem, const SolverConfig& config,
                   const Vector& x0) {
  const LineSearchParams& ls = config.line_search;
  ls.validate();
  if (config.window < 0) throw std::invalid_argument("run_pgels: window N must be nonnegative");
  const double lip = problem.smooth.lipschitz_bound;
  if (!(lip > 0.0)) throw std::invalid_argument("run_pgels: Lipschitz bound must be positive");
  const double mu_floor = (lip + 2.0 * ls.c) / (1.0 - ls.delta);
  if (ls.mu_max < mu_floor) {
    throw std::invalid_argument("run_pgels: mu_max must be at least (L_f + 2c)/(1 - delta)");
  }
  if (ls.mu_min > mu_floor) {
    throw std::invalid_argument("run_pgels: mu_min must be at most (L_f + 2c)/(1 - delta)");
  }

  const double f0 = finite_objective_at_start(problem, x0, "run_pgels");
  const double beta_cap = ls.delta * ls.beta_max;

  StopClock clock;
  RunTrace trace;
  trace.iterations.push_back({0, f0, f0, 0.0, 0, 0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0});

  PotentialHistory history(config.window);
  history.push({f0, f0, 1.0, 0.0, 0.0});
  double monitor_prev = f0;

  Vector x = x0;
  Vector x_prev = x0;
  Vector y_acc = x0;  // extrapolated point of the last accepted step
  Vector g_acc;       // gradient at y_acc; valid from k >= 1 on
  double mu_bar_prev = 1.0;
  NesterovState nesterov;
  long work = 0;
  const double mu0_start = clamp(config.mu0_initial, ls.mu_min, ls.mu_max);

  for (long k = 0;; ++k) {
    if (k >= config.budget.max_iterations) {
      trace.stop_reason = StopReason::iteration_budget;
      break;
    }
    if (clock.seconds() >= config.budget.max_seconds) {
      trace.stop_reason = StopReason::time_budget;
      break;
    }
    if (config.budget.max_prox_evals && work >= *config.budget.max_prox_evals) {
      trace.stop_reason = StopReason::work_budget;
      break;
    }

    double beta0 = 0.0;
    NesterovState nesterov_next = nesterov;
    switch (config.beta_schedule) {
      case BetaSchedule::zero:
        break;
      case BetaSchedule::nesterov:
      case BetaSchedule::nesterov_restart: {
        const auto [raw, next] = nesterov_beta(nesterov);
        beta0 = std::min(raw, beta_cap);
        nesterov_next = next;
        break;
      }
      case BetaSchedule::constant:
        beta0 = std::min(config.beta_constant, beta_cap);
        break;
    }
    if (!(beta0 >= 0.0 && beta0 <= beta_cap)) {
      throw std::logic_error("run_pgels: beta outside [0, delta*beta_max]");
    }

    double beta = beta0;
    Vector y = x + beta * (x - x_prev);
    Vector g = problem.smooth.gradient(y);

    double mu0;
    if (k == 0 || config.mu0_schedule == Mu0Schedule::constant) {
      mu0 = mu0_start;
    } else {
      mu0 = spectral_mu0(y, y_acc, g, g_acc, mu_bar_prev, ls.mu_min, ls.mu_max);
    }
    double mu = mu0;

    // Acceptance threshold for beta at mu_max; below it the merit decrease
    // is guaranteed, which yields the inner-iteration bound asserted below.
    const double beta_guarantee = std::sqrt(
        ls.delta * (ls.mu_max - lip) * mu_bar_prev /
        (4.0 * (ls.mu_max + lip) * (ls.mu_max + lip)));

    int inner = 0;
    Vector u;
    double f_u = 0.0, step_sq = 0.0, h_candidate = 0.0;
    bool stalled = false;
    for (;;) {
      ++inner;
      if (inner > kInnerCap) {
        throw std::logic_error("run_pgels: line search exceeded the hard inner cap");
      }
      u = prox_grad_step(y, g, mu, problem.prox);
      ++work;
      f_u = objective_value(problem, u);
      step_sq = (u - x).squaredNorm();
      h_candidate = f_u + 0.25 * ls.delta * mu * step_sq;
      const double window = history.window_max().value;
      if (h_candidate - window <= -0.5 * ls.c * step_sq) break;

      // At mu_max with beta under the guarantee threshold rejection is
      // theoretically impossible; if the miss is within evaluation noise the
      // run has hit the floating-point floor and stops instead of throwing.
      if (mu == ls.mu_max && beta <= beta_guarantee) {
        const double miss = (h_candidate - window) + 0.5 * ls.c * step_sq;
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max({1.0, std::abs(h_candidate), std::abs(window)});
        if (miss <= noise) {
          stalled = true;
          break;
        }
      }

      const auto [mu_next, beta_next] = shrink_params(mu, beta, ls);
      mu = mu_next;
      if (beta_next != beta) {
        beta = beta_next;
        y = x + beta * (x - x_prev);
        g = problem.smooth.gradient(y);
      }
    }
    if (stalled) {
      trace.stop_reason = StopReason::stalled;
      break;
    }

    // Inner-iteration bound: shrinking reaches mu_max after at most n_mu
    // steps and the guarantee threshold for beta after at most n_beta, so
    // acceptance comes within max(n_mu, n_beta) + 1 attempts.
    const long n_mu = (mu0 == ls.mu_max)
                          ? 1
                          : static_cast<long>(std::floor(
                                (std::log(ls.mu_max) - std::log(ls.mu_min)) / std::log(ls.tau) +
                                1.0));
    const long n_beta =
        (beta0 <= beta_guarantee)
            ? n_mu
            : static_cast<long>(std::floor(
                  (std::log(beta_cap) - std::log(beta_guarantee)) / (-std::log(ls.eta)) + 1.0));
    if (inner > std::max(n_mu, n_beta) + 1) {
      throw std::logic_error("run_pgels: inner iterations exceeded the line-search bound");
    }
    if (!(mu >= ls.mu_min && mu <= ls.mu_max)) {
      throw std::logic_error("run_pgels: accepted mu outside [mu_min, mu_max]");
    }

    const double step_norm = std::sqrt(step_sq);
    const Vector x_old = x;
    x_prev = x;
    x = u;

    history.push({h_candidate, f_u, mu, beta, step_norm});
    const double monitor = history.window_max().value;
    if (monitor > monitor_prev + 1e-10) {
      throw std::logic_error("run_pgels: window maximum increased");
    }
    monitor_prev = monitor;
    if (h_candidate > f0 + 1e-10) {
      throw std::logic_error("run_pgels: merit value exceeded F(x0)");
    }

    trace.iterations.push_back({k + 1, f_u, h_candidate, clock.seconds(), work, inner,
                                step_norm, step_sq, mu, beta, mu0, beta0});

    if (config.beta_schedule == BetaSchedule::nesterov ||
        config.beta_schedule == BetaSchedule::nesterov_restart) {
      nesterov = nesterov_next;
      if (config.beta_schedule == BetaSchedule::nesterov_restart) {
        const bool scheduled =
            config.restart_interval && k > 0 && k % *config.restart_interval == 0;
        const bool gradient_fired = (y - x).dot(x - x_old) > 0.0;
        if (scheduled || gradient_fired) nesterov = NesterovState{1.0, 1.0};
      }
    }

    y_acc = y;
    g_acc = g;
    mu_bar_prev = mu;

    if (config.budget.residual_tol) {
      const double residual = stationarity_residual(problem, x, lip);
      if (residual <= *config.budget.residual_tol) {
        trace.stop_reason = StopReason::residual;
        break;
      }
    }
  }

  trace.final_x = x;
  trace.total_seconds = clock.seconds();
  trace.total_prox_evals = work;
  return trace;
}

RunTrace run_fista(const CompositeProblem& problem, FistaVariant variant,
                   std::optional<long> restart_interval, const Vector& x0,
                   const Budget& budget) {
  const double lip = problem.smooth.lipschitz_bound;
  if (!(lip > 0.0)) throw std::invalid_argument("run_fista: Lipschitz bound must be positive");
  const double f0 = finite_objective_at_start(problem, x0, "run_fista");

  StopClock clock;
  RunTrace trace;
  trace.iterations.push_back({0, f0, f0, 0.0, 0, 0, 0.0, 0.0, lip, 0.0, lip, 0.0});

  Vector x = x0;
  Vector x_prev = x0;
  NesterovState t;
  long work = 0;

  for (long k = 0;; ++k) {
    if (k >= budget.max_iterations) {
      trace.stop_reason = StopReason::iteration_budget;
      break;
    }
    if (clock.seconds() >= budget.max_seconds) {
      trace.stop_reason = StopReason::time_budget;
      break;
    }
    if (budget.max_prox_evals && work >= *budget.max_prox_evals) {
      trace.stop_reason = StopReason::work_budget;
      break;
    }

    const auto [beta_raw, t_next] = nesterov_beta(t);
    const double beta = variant == FistaVariant::pg ? 0.0 : beta_raw;
    const Vector y = x + beta * (x - x_prev);
    const Vector g = problem.smooth.gradient(y);
    const Vector u = prox_grad_step(y, g, lip, problem.prox);
    ++work;
    const double f_u = objective_value(problem, u);

    bool restart = false;
    if (variant == FistaVariant::refista) {
      if (restart_interval && k > 0 && k % *restart_interval == 0) restart = true;
      if ((y - u).dot(u - x) > 0.0) restart = true;
    }
    t = restart ? NesterovState{1.0, 1.0} : t_next;

    const double step_sq = (u - x).squaredNorm();
    x_prev = x;
    x = u;
    trace.iterations.push_back({k + 1, f_u, f_u, clock.seconds(), work, 1,
                                std::sqrt(step_sq), step_sq, lip, beta, lip, beta});

    if (budget.residual_tol) {
      const double residual = stationarity_residual(problem, x, lip);
      if (residual <= *budget.residual_tol) {
        trace.stop_reason = StopReason::residual;
        break;
      }
    }
  }

  trace.final_x = x;
  trace.total_seconds = clock.seconds();
  trace.total_prox_evals = work;
  return trace;
}

RunTrace run_pdcae(const SmoothTerm& smooth, const L1MinusL2Term& reg,
                   const Vector& x0, const Budget& budget, long restart_interval) {
  CompositeProblem problem{smooth, make_l1_minus_l2_term(reg), x0.size()};
  const double lip = smooth.lipschitz_bound;
  if (!(lip > 0.0)) throw std::invalid_argument("run_pdcae: Lipschitz bound must be positive");
  const double f0 = finite_objective_at_start(problem, x0, "run_pdcae");
  const L1Term subproblem_reg{reg.lambda, false};

  StopClock clock;
  RunTrace trace;
  trace.iterations.push_back({0, f0, f0, 0.0, 0, 0, 0.0, 0.0, lip, 0.0, lip, 0.0});

  Vector x = x0;
  Vector x_prev = x0;
  NesterovState t;
  long work = 0;

  for (long k = 0;; ++k) {
    if (k >= budget.max_iterations) {
      trace.stop_reason = StopReason::iteration_budget;
      break;
    }
    if (clock.seconds() >= budget.max_seconds) {
      trace.stop_reason = StopReason::time_budget;
      break;
    }
    if (budget.max_prox_evals && work >= *budget.max_prox_evals) {
      trace.stop_reason = StopReason::work_budget;
      break;
    }

    // xi in lambda * subdiff(||x||): the gradient away from the origin,
    // zero (a valid subgradient) at the origin.
    const double xnorm = x.norm();
    const Vector xi = xnorm > 0.0 ? Vector((reg.lambda / xnorm) * x)
                                  : Vector(Vector::Zero(x.size()));

    const auto [beta_raw, t_next] = nesterov_beta(t);
    const double beta = beta_raw;
    const Vector y = x + beta * (x - x_prev);
    const Vector g = smooth.gradient(y) - xi;
    const Vector u = prox_l1(y - g / lip, 1.0 / lip, subproblem_reg);
    ++work;
    const double f_u = objective_value(problem, u);

    bool restart = false;
    if (restart_interval > 0 && k > 0 && k % restart_interval == 0) restart = true;
    if ((y - u).dot(u - x) > 0.0) restart = true;
    t = restart ? NesterovState{1.0, 1.0} : t_next;

    const double step_sq = (u - x).squaredNorm();
    x_prev = x;
    x = u;
    trace.iterations.push_back({k + 1, f_u, f_u, clock.seconds(), work, 1,
                                std::sqrt(step_sq), step_sq, lip, beta, lip, beta});

    if (budget.residual_tol) {
      const double residual = stationarity_residual(problem, x, lip);
      if (residual <= *budget.residual_tol) {
        trace.stop_reason = StopReason::residual;
        break;
      }
    }
  }

  trace.final_x = x;
  trace.total_seconds = clock.seconds();
  trace.total_prox_evals = work;
  return trace;
}

RateFit fit_rate(std::span<const double> gaps) {
  if (gaps.size() < 10) throw std::invalid_argument("fit_rate: need at least 10 gaps");
  for (const double g : gaps) {
    if (!(g > 0.0)) throw std::invalid_argument("fit_rate: gaps must be positive");
  }
  const std::size_t start = gaps.size() / 2;
  std::vector<double> ks, log_ks, log_gaps;
  for (std::size_t i = start; i < gaps.size(); ++i) {
    const double position = static_cast<double>(i + 1);
    ks.push_back(position);
    log_ks.push_back(std::log(position));
    log_gaps.push_back(std::log(gaps[i]));
  }
  const LinearFit geometric = least_squares_line(ks, log_gaps);
  const LinearFit power = least_squares_line(log_ks, log_gaps);

  RateFit fit;
  if (geometric.r2 >= power.r2) {
    fit.model = RateModel::geometric;
    fit.parameter = std::exp(geometric.slope);
    fit.quality = geometric.r2;
  } else {
    fit.model = RateModel::power;
    fit.parameter = power.slope;
    fit.quality = power.r2;
  }
  return fit;
}

}  // namespace proxgrad
