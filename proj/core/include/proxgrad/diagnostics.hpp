#pragma once

#include <string>
#include <vector>

#include "proxgrad/solver.hpp"

namespace proxgrad {

/// Outcome of one family of trace checks. Failures carry a human-readable
/// description of the first offending iteration.
struct CheckReport {
  bool ok = true;
  long checked = 0;
  std::vector<std::string> failures;

  void fail(std::string message) {
    ok = false;
    failures.push_back(std::move(message));
  }
};

/// Re-evaluates the acceptance inequality for every accepted step from the
/// recorded merit entries, bit-for-bit with the in-loop comparison.
CheckReport check_acceptance(const RunTrace& trace, const LineSearchParams& params,
                             int window_n);

/// Re-derives the inner-iteration bound (shrink count to reach mu_max plus
/// the beta allowance) per step and compares against the recorded counts;
/// also enforces the hard cap of 100.
CheckReport check_inner_bounds(const RunTrace& trace, const LineSearchParams& params,
                               double lipschitz_bound);

/// The running window maximum of merit entries must be non-increasing
/// (within `slack`).
CheckReport check_monitor_monotone(const RunTrace& trace, int window_n,
                                   double slack = 1e-10);

/// Every merit entry must stay below F(x0) (within `slack`).
CheckReport check_global_bound(const RunTrace& trace, double slack = 1e-10);

/// For traces of at least `min_iterations` accepted steps, the mean step
/// norm over the final decile must fall below the mean over the first decile.
CheckReport check_diminishing_steps(const RunTrace& trace, long min_iterations = 500);

/// Bounds recorded along the run: mu in [mu_min, mu_max] and beta in
/// [0, delta*beta_max] at every accepted step.
CheckReport check_parameter_ranges(const RunTrace& trace, const LineSearchParams& params);

/// All of the above for one solver trace.
CheckReport check_all(const RunTrace& trace, const LineSearchParams& params,
                      int window_n, double lipschitz_bound);

}  // namespace proxgrad
