#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>

namespace proxgrad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Smooth part f of a composite objective: value, gradient, and a Lipschitz
/// constant for the gradient. Immutable after construction.
struct SmoothTerm {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz_bound = 0.0;
};

/// Prox-capable part P: extended-real value (+infinity outside dom P) and the
/// proximal map u = argmin P(z) + ||z - y||^2 / (2 nu). `lower_bound` is a
/// global lower bound on the value.
struct ProxTerm {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&, double)> prox;  // (y, nu)
  double lower_bound = 0.0;
};

/// Composite objective F = f + P over R^dimension.
struct CompositeProblem {
  SmoothTerm smooth;
  ProxTerm prox;
  Eigen::Index dimension = 0;
};

/// F(x) = f(x) + P(x); +infinity iff x is outside dom P.
double objective_value(const CompositeProblem& problem, const Vector& x);

/// Scaled fixed-point residual of the prox-gradient map,
///   mu * || x - Prox_{P/mu}(x - grad f(x)/mu) ||,
/// zero exactly at fixed points. Used for termination and reporting; callers
/// conventionally pass mu = lipschitz_bound.
double stationarity_residual(const CompositeProblem& problem, const Vector& x,
                             double mu);

namespace detail {
void require_dimension(const CompositeProblem& problem, const Vector& x,
                       const char* where);
}

}  // namespace proxgrad
