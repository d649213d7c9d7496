#pragma once

#include <utility>
#include <vector>

#include "proxgrad/problem.hpp"

namespace proxgrad {

/// One monitored iterate: the merit value h = F + (delta*mu/4)*||u - v||^2
/// together with the pieces it was assembled from, so traces can be
/// re-validated after the fact.
struct PotentialEntry {
  double h_value = 0.0;
  double f_value = 0.0;
  double mu_bar = 1.0;
  double beta_bar = 0.0;
  double step_norm = 0.0;
};

/// Sliding window of the last N+1 potential entries; realizes the max in the
/// non-monotone acceptance test and the monitor index that attains it.
class PotentialHistory {
 public:
  explicit PotentialHistory(int window_n);

  /// Appends the entry for the next iteration index (0, 1, 2, ... in order).
  void push(const PotentialEntry& entry);

  struct MaxResult {
    double value = 0.0;
    int index = 0;  // iteration index attaining the max, ties toward the latest
  };

  /// Max over the stored window [k-N]_+ .. k where k is the latest index.
  MaxResult window_max() const;

  int latest_index() const { return next_index_ - 1; }
  int window_n() const { return window_n_; }
  bool empty() const { return entries_.empty(); }

  /// Entry for an absolute iteration index still inside the window.
  const PotentialEntry& entry(int index) const;

 private:
  int window_n_;
  int next_index_ = 0;
  std::vector<PotentialEntry> entries_;  // ring, capacity window_n_+1
};

/// Line-search constants. Validity of mu_max against the Lipschitz bound
/// ((L_f + 2c)/(1 - delta) <= mu_max) is checked at solver entry, where L_f
/// is known.
struct LineSearchParams {
  double c = 1e-4;
  double tau = 2.0;
  double eta = 0.8;
  double delta = 0.0;
  double mu_min = 1e-6;
  double mu_max = 1.0;
  double beta_max = 10.0;

  void validate() const;  // throws std::invalid_argument on bad constants
};

/// Constants used throughout the experiments: c=1e-4, tau=2, eta=0.8,
/// beta_max=10, mu_min=1e-6, mu_max=(L_f + 2c)/(1 - delta).
LineSearchParams default_line_search(double lipschitz_bound, double delta);

/// H_delta(u, v, mu) = f_value + (delta*mu/4) * ||u - v||^2.
double potential_value(double f_value, const Vector& u, const Vector& v,
                       double mu, double delta);

/// Window max and its iteration index; requires k to be the latest index.
std::pair<double, int> history_max(const PotentialHistory& history, int k);

/// The acceptance test: true iff
///   H_delta(u, x_k, mu_k) - max_window <= -(c/2) * ||u - x_k||^2.
/// Exact floating-point comparison, no slack.
bool accept_step(double candidate_f, const Vector& u, const Vector& x_k,
                 double mu_k, const PotentialHistory& history,
                 const LineSearchParams& params);

/// One shrink: mu' = min(tau*mu, mu_max), beta' = eta*beta.
std::pair<double, double> shrink_params(double mu, double beta,
                                        const LineSearchParams& params);

}  // namespace proxgrad
