#include "proxgrad/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace proxgrad {

namespace {

double window_max_before(const std::vector<IterationRecord>& rows, std::size_t k,
                         int window_n) {
  // max of merit entries for indices [k-N]_+ .. k
  const std::size_t first = k >= static_cast<std::size_t>(window_n)
                                ? k - static_cast<std::size_t>(window_n)
                                : 0;
  double best = -infinity;
  for (std::size_t i = first; i <= k; ++i) best = std::max(best, rows[i].h_value);
  return best;
}

}  // namespace

CheckReport check_acceptance(const RunTrace& trace, const LineSearchParams& params,
                             int window_n) {
  CheckReport report;
  const auto& rows = trace.iterations;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const IterationRecord& next = rows[k + 1];
    const double window = window_max_before(rows, k, window_n);
    const double lhs = next.h_value - window;
    const double rhs = -0.5 * params.c * next.step_sq;
    ++report.checked;
    if (!(lhs <= rhs)) {
      std::ostringstream msg;
      msg << "acceptance violated at k=" << next.k << ": lhs=" << lhs << " rhs=" << rhs;
      report.fail(msg.str());
    }
  }
  return report;
}

CheckReport check_inner_bounds(const RunTrace& trace, const LineSearchParams& params,
                               double lipschitz_bound) {
  CheckReport report;
  const auto& rows = trace.iterations;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const IterationRecord& row = rows[k];
    const double mu_bar_prev = rows[k - 1].mu_accepted;
    const double beta_guarantee =
        std::sqrt(params.delta * (params.mu_max - lipschitz_bound) * mu_bar_prev /
                  (4.0 * (params.mu_max + lipschitz_bound) * (params.mu_max + lipschitz_bound)));
    const long n_mu =
        (row.mu0 == params.mu_max)
            ? 1
            : static_cast<long>(std::floor(
                  (std::log(params.mu_max) - std::log(params.mu_min)) / std::log(params.tau) +
                  1.0));
    const long n_beta =
        (row.beta0 <= beta_guarantee)
            ? n_mu
            : static_cast<long>(std::floor((std::log(params.delta * params.beta_max) -
                                            std::log(beta_guarantee)) /
                                               (-std::log(params.eta)) +
                                           1.0));
    const long bound = std::max(n_mu, n_beta) + 1;
    ++report.checked;
    if (row.inner_count > bound || row.inner_count > 100) {
      std::ostringstream msg;
      msg << "inner count " << row.inner_count << " exceeds bound " << bound
          << " at k=" << row.k;
      report.fail(msg.str());
    }
  }
  return report;
}

CheckReport check_monitor_monotone(const RunTrace& trace, int window_n, double slack) {
  CheckReport report;
  const auto& rows = trace.iterations;
  double previous = infinity;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double monitor = window_max_before(rows, k, window_n);
    ++report.checked;
    if (monitor > previous + slack) {
      std::ostringstream msg;
      msg << "window max increased at k=" << k << ": " << previous << " -> " << monitor;
      report.fail(msg.str());
    }
    previous = monitor;
  }
  return report;
}

CheckReport check_global_bound(const RunTrace& trace, double slack) {
  CheckReport report;
  if (trace.iterations.empty()) return report;
  const double f0 = trace.iterations.front().f_value;
  for (const IterationRecord& row : trace.iterations) {
    ++report.checked;
    if (row.h_value > f0 + slack) {
      std::ostringstream msg;
      msg << "merit " << row.h_value << " above F(x0)=" << f0 << " at k=" << row.k;
      report.fail(msg.str());
    }
  }
  return report;
}

CheckReport check_diminishing_steps(const RunTrace& trace, long min_iterations) {
  CheckReport report;
  const auto& rows = trace.iterations;
  const long steps = static_cast<long>(rows.size()) - 1;
  if (steps < min_iterations) return report;  // nothing to check, vacuously ok
  const long decile = std::max<long>(steps / 10, 1);
  double first = 0.0, last = 0.0;
  for (long i = 0; i < decile; ++i) {
    first += rows[static_cast<std::size_t>(1 + i)].step_norm;
    last += rows[rows.size() - 1 - static_cast<std::size_t>(i)].step_norm;
  }
  ++report.checked;
  if (!(last / decile < first / decile)) {
    std::ostringstream msg;
    msg << "final-decile mean step " << last / decile
        << " not below first-decile mean " << first / decile;
    report.fail(msg.str());
  }
  return report;
}

CheckReport check_parameter_ranges(const RunTrace& trace, const LineSearchParams& params) {
  CheckReport report;
  const auto& rows = trace.iterations;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const IterationRecord& row = rows[k];
    ++report.checked;
    if (!(row.mu_accepted >= params.mu_min && row.mu_accepted <= params.mu_max)) {
      std::ostringstream msg;
      msg << "mu " << row.mu_accepted << " outside bounds at k=" << row.k;
      report.fail(msg.str());
    }
    if (!(row.beta_accepted >= 0.0 &&
          row.beta_accepted <= params.delta * params.beta_max)) {
      std::ostringstream msg;
      msg << "beta " << row.beta_accepted << " outside [0, delta*beta_max] at k=" << row.k;
      report.fail(msg.str());
    }
  }
  return report;
}

CheckReport check_all(const RunTrace& trace, const LineSearchParams& params,
                      int window_n, double lipschitz_bound) {
  CheckReport combined;
  for (const CheckReport& report :
       {check_acceptance(trace, params, window_n),
        check_inner_bounds(trace, params, lipschitz_bound),
        check_monitor_monotone(trace, window_n),
        check_global_bound(trace),
        check_diminishing_steps(trace),
        check_parameter_ranges(trace, params)}) {
    combined.checked += report.checked;
    if (!report.ok) {
      combined.ok = false;
      combined.failures.insert(combined.failures.end(), report.failures.begin(),
                               report.failures.end());
    }
  }
  return combined;
}

}  // namespace proxgrad
