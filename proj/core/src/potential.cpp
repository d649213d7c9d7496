#include "proxgrad/potential.hpp"

#include <algorithm>
#include <stdexcept>

namespace proxgrad {

PotentialHistory::PotentialHistory(int window_n) : window_n_(window_n) {
  if (window_n < 0) throw std::invalid_argument("PotentialHistory: N must be nonnegative");
  entries_.reserve(static_cast<std::size_t>(window_n) + 1);
}

void PotentialHistory::push(const PotentialEntry& entry) {
  if (static_cast<int>(entries_.size()) == window_n_ + 1) {
    entries_[static_cast<std::size_t>(next_index_) % entries_.size()] = entry;
  } else {
    entries_.push_back(entry);
  }
  ++next_index_;
}

PotentialHistory::MaxResult PotentialHistory::window_max() const {
  if (entries_.empty()) throw std::logic_error("PotentialHistory: window_max on empty history");
  MaxResult best{-infinity, -1};
  const int latest = latest_index();
  const int first = std::max(latest - window_n_, 0);
  for (int index = first; index <= latest; ++index) {
    const double h = entry(index).h_value;
    if (h >= best.value) best = {h, index};
  }
  return best;
}

const PotentialEntry& PotentialHistory::entry(int index) const {
  const int latest = latest_index();
  const int first = std::max(latest - window_n_, 0);
  if (index < first || index > latest) {
    throw std::logic_error("PotentialHistory: index outside the stored window");
  }
  const std::size_t capacity =
      std::min(entries_.size(), static_cast<std::size_t>(window_n_) + 1);
  return entries_[static_cast<std::size_t>(index) % capacity];
}

void LineSearchParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("LineSearchParams: c must be positive");
  if (!(tau > 1.0)) throw std::invalid_argument("LineSearchParams: tau must exceed 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("LineSearchParams: eta must lie in (0,1)");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("LineSearchParams: delta must lie in [0,1)");
  if (!(mu_min > 0.0)) throw std::invalid_argument("LineSearchParams: mu_min must be positive");
  if (!(mu_max >= mu_min)) throw std::invalid_argument("LineSearchParams: mu_max must be at least mu_min");
  if (!(beta_max >= 0.0)) throw std::invalid_argument("LineSearchParams: beta_max must be nonnegative");
}

LineSearchParams default_line_search(double lipschitz_bound, double delta) {
  LineSearchParams params;
  params.delta = delta;
  params.mu_max = (lipschitz_bound + 2.0 * params.c) / (1.0 - delta);
  params.validate();
  return params;
}

double potential_value(double f_value, const Vector& u, const Vector& v,
                       double mu, double delta) {
  if (!(mu > 0.0)) throw std::invalid_argument("potential_value: mu must be positive");
  return f_value + 0.25 * delta * mu * (u - v).squaredNorm();
}

std::pair<double, int> history_max(const PotentialHistory& history, int k) {
  if (history.empty()) throw std::logic_error("history_max: empty history");
  if (k != history.latest_index()) {
    throw std::logic_error("history_max: k must be the latest recorded index");
  }
  const auto result = history.window_max();
  return {result.value, result.index};
}

bool accept_step(double candidate_f, const Vector& u, const Vector& x_k,
                 double mu_k, const PotentialHistory& history,
                 const LineSearchParams& params) {
  const double step_sq = (u - x_k).squaredNorm();
  const double h_candidate = candidate_f + 0.25 * params.delta * mu_k * step_sq;
  const double window = history.window_max().value;
  return h_candidate - window <= -0.5 * params.c * step_sq;
}

std::pair<double, double> shrink_params(double mu, double beta,
                                        const LineSearchParams& params) {
  return {std::min(params.tau * mu, params.mu_max), params.eta * beta};
}

}  // namespace proxgrad
