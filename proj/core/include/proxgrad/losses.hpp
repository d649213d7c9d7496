#pragma once

#include "proxgrad/problem.hpp"

namespace proxgrad {

/// Data for the least-squares loss 0.5 * ||A x - b||^2.
struct LeastSquaresData {
  Matrix A;
  Vector b;
};

/// Data for the logistic loss sum_i log(1 + exp(-b_i (C x)_i)). C carries the
/// augmented design: its i-th row is (a_i^T, 1) so the last component of x is
/// the intercept. Labels must be -1 or +1 and not all identical.
struct LogisticData {
  Matrix C;
  Vector b;
};

/// Builds the least-squares term with lipschitz_bound = ||A||^2.
SmoothTerm least_squares_term(const LeastSquaresData& data);

/// Builds the logistic term with lipschitz_bound = 0.25 * ||C||^2.
SmoothTerm logistic_term(const LogisticData& data);

/// Squared spectral norm ||M||^2 via power iteration on M^T M. The iteration
/// starts from a fixed seeded random vector and stops when successive
/// Rayleigh quotients agree to 1e-9 relative or after 5000 iterations.
/// Returns 0 for the zero matrix.
double spectral_norm_sq(const Matrix& m);

}  // namespace proxgrad
