#include "proxgrad/problem.hpp"

#include <stdexcept>
#include <string>

namespace proxgrad {

namespace detail {

void require_dimension(const CompositeProblem& problem, const Vector& x,
                       const char* where) {
  if (x.size() != problem.dimension) {
    throw std::invalid_argument(std::string(where) + ": vector has length " +
                                std::to_string(x.size()) + ", problem dimension is " +
                                std::to_string(problem.dimension));
  }
}

}  // namespace detail

double objective_value(const CompositeProblem& problem, const Vector& x) {
  detail::require_dimension(problem, x, "objective_value");
  const double p = problem.prox.value(x);
  if (p == infinity) return infinity;
  return problem.smooth.value(x) + p;
}

double stationarity_residual(const CompositeProblem& problem, const Vector& x,
                             double mu) {
  detail::require_dimension(problem, x, "stationarity_residual");
  if (!(mu > 0.0)) throw std::invalid_argument("stationarity_residual: mu must be positive");
  const Vector g = problem.smooth.gradient(x);
  const Vector u = problem.prox.prox(x - g / mu, 1.0 / mu);
  return mu * (x - u).norm();
}

}  // namespace proxgrad
