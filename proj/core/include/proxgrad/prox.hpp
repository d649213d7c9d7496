#pragma once

#include <functional>
#include <vector>

#include "proxgrad/problem.hpp"

namespace proxgrad {

/// P(x) = lambda * ||x||_1, optionally leaving the last coordinate
/// unpenalized (the intercept of the augmented logistic variable).
struct L1Term {
  double lambda = 1.0;
  bool skip_last = false;
};

/// Difference-of-convex regularizer P(x) = lambda * (||x||_1 - ||x||).
struct L1MinusL2Term {
  double lambda = 1.0;
};

/// Soft threshold by nu*lambda componentwise; identity on the last
/// coordinate when term.skip_last is set.
Vector prox_l1(const Vector& y, double nu, const L1Term& term);

/// A global minimizer of lambda(||x||_1 - ||x||) + ||x - y||^2 / (2 nu).
/// The prox of this nonconvex term is set-valued; ties are broken toward the
/// 1-sparse candidate on the earliest maximal coordinate.
Vector prox_l1_minus_l2(const Vector& y, double nu, const L1MinusL2Term& term);

/// Projection onto the nonnegative orthant.
Vector project_nonneg(const Vector& y);

/// Euclidean projection onto the probability simplex, sort-and-threshold.
Vector project_simplex(const Vector& y);

/// Brute-force prox for validation: picks the best point of `grid` for
/// value(z) + ||z - y||^2 / (2 nu), then polishes by pattern search over
/// axis and pairwise-difference moves with shrinking step until the step
/// falls below 1e-6. Rejects dimensions above 3.
Vector prox_oracle(const std::function<double(const Vector&)>& value,
                   const Vector& y, double nu, const std::vector<Vector>& grid);

/// Value functions and ProxTerm bundles for the regularizers above.
double l1_value(const Vector& x, const L1Term& term);
double l1_minus_l2_value(const Vector& x, const L1MinusL2Term& term);

ProxTerm make_l1_term(const L1Term& term);
ProxTerm make_l1_minus_l2_term(const L1MinusL2Term& term);
ProxTerm make_zero_term();
ProxTerm make_nonneg_indicator();
ProxTerm make_simplex_indicator();

}  // namespace proxgrad
