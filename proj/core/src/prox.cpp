#include "proxgrad/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace proxgrad {

namespace {

double soft(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

Vector prox_l1(const Vector& y, double nu, const L1Term& term) {
  if (!(nu > 0.0)) throw std::invalid_argument("prox_l1: nu must be positive");
  const double t = nu * term.lambda;
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = soft(y[i], t);
  if (term.skip_last && y.size() > 0) out[y.size() - 1] = y[y.size() - 1];
  return out;
}

// Cases follow the closed form of the l1-2 prox: when some |y_i| exceeds
// nu*lambda the minimizer is the soft-thresholded point scaled out by
// (||z|| + nu*lambda)/||z||; otherwise the penalty vanishes on 1-sparse
// points and the best candidate keeps only one maximal coordinate of y.
Vector prox_l1_minus_l2(const Vector& y, double nu, const L1MinusL2Term& term) {
  if (!(nu > 0.0)) throw std::invalid_argument("prox_l1_minus_l2: nu must be positive");
  const Eigen::Index n = y.size();
  const double t = nu * term.lambda;
  Vector out = Vector::Zero(n);
  if (n == 0) return out;
  if (n == 1) return y;  // ||x||_1 - ||x|| vanishes identically in 1-D

  Eigen::Index imax = 0;
  double amax = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(y[i]);
    if (a > amax) {
      amax = a;
      imax = i;
    }
  }
  if (amax == 0.0) return out;

  if (amax > t) {
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = soft(y[i], t);
    const double znorm = z.norm();
    out = z * ((znorm + t) / znorm);
    return out;
  }
  // ||y||_inf <= nu*lambda: keep the earliest maximal coordinate as-is
  out[imax] = y[imax];
  return out;
}

Vector project_nonneg(const Vector& y) { return y.cwiseMax(0.0); }

Vector project_simplex(const Vector& y) {
  const Eigen::Index n = y.size();
  if (n < 1) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = std::max(y[i] - theta, 0.0);
  return out;
}

Vector prox_oracle(const std::function<double(const Vector&)>& value,
                   const Vector& y, double nu, const std::vector<Vector>& grid) {
  if (grid.empty()) throw std::invalid_argument("prox_oracle: empty grid");
  if (y.size() > 3) throw std::invalid_argument("prox_oracle: dimension above 3");
  if (!(nu > 0.0)) throw std::invalid_argument("prox_oracle: nu must be positive");
  const Eigen::Index n = y.size();
  const auto objective = [&](const Vector& z) {
    const double v = value(z);
    if (v == infinity) return infinity;
    return v + (z - y).squaredNorm() / (2.0 * nu);
  };

  Vector best = grid.front();
  double best_obj = objective(best);
  double spacing = 0.0;
  for (const Vector& z : grid) {
    if (z.size() != n) throw std::invalid_argument("prox_oracle: grid point dimension mismatch");
    const double obj = objective(z);
    if (obj < best_obj) {
      best = z;
      best_obj = obj;
    }
    spacing = std::max(spacing, (z - grid.front()).cwiseAbs().maxCoeff());
  }
  if (best_obj == infinity) {
    throw std::invalid_argument("prox_oracle: no feasible grid point");
  }

  // Pattern-search moves: axes plus pairwise differences. The difference
  // directions keep refinement alive on the simplex hyperplane, where axis
  // moves are all infeasible.
  std::vector<Vector> moves;
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    moves.push_back(e);
    moves.push_back(-e);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Vector d = Vector::Zero(n);
      d[i] = 1.0;
      d[j] = -1.0;
      moves.push_back(d);
      moves.push_back(-d);
    }
  }

  double step = std::max(spacing, 1.0);
  while (step >= 1e-6) {
    bool improved = false;
    for (const Vector& d : moves) {
      const Vector candidate = best + step * d;
      const double obj = objective(candidate);
      if (obj < best_obj) {
        best = candidate;
        best_obj = obj;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

double l1_value(const Vector& x, const L1Term& term) {
  double total = 0.0;
  const Eigen::Index limit = term.skip_last ? x.size() - 1 : x.size();
  for (Eigen::Index i = 0; i < limit; ++i) total += std::abs(x[i]);
  return term.lambda * total;
}

double l1_minus_l2_value(const Vector& x, const L1MinusL2Term& term) {
  return term.lambda * (x.lpNorm<1>() - x.norm());
}

ProxTerm make_l1_term(const L1Term& term) {
  if (!(term.lambda > 0.0)) throw std::invalid_argument("make_l1_term: lambda must be positive");
  ProxTerm p;
  p.value = [term](const Vector& x) { return l1_value(x, term); };
  p.prox = [term](const Vector& y, double nu) { return prox_l1(y, nu, term); };
  p.lower_bound = 0.0;
  return p;
}

ProxTerm make_l1_minus_l2_term(const L1MinusL2Term& term) {
  if (!(term.lambda > 0.0)) {
    throw std::invalid_argument("make_l1_minus_l2_term: lambda must be positive");
  }
  ProxTerm p;
  p.value = [term](const Vector& x) { return l1_minus_l2_value(x, term); };
  p.prox = [term](const Vector& y, double nu) { return prox_l1_minus_l2(y, nu, term); };
  p.lower_bound = 0.0;
  return p;
}

ProxTerm make_zero_term() {
  ProxTerm p;
  p.value = [](const Vector&) { return 0.0; };
  p.prox = [](const Vector& y, double) { return y; };
  p.lower_bound = 0.0;
  return p;
}

ProxTerm make_nonneg_indicator() {
  ProxTerm p;
  p.value = [](const Vector& x) {
    return (x.array() >= 0.0).all() ? 0.0 : infinity;
  };
  p.prox = [](const Vector& y, double) { return project_nonneg(y); };
  p.lower_bound = 0.0;
  return p;
}

ProxTerm make_simplex_indicator() {
  ProxTerm p;
  p.value = [](const Vector& x) {
    if (!(x.array() >= 0.0).all()) return infinity;
    return std::abs(x.sum() - 1.0) <= 1e-9 ? 0.0 : infinity;
  };
  p.prox = [](const Vector& y, double) { return project_simplex(y); };
  p.lower_bound = 0.0;
  return p;
}

}  // namespace proxgrad
