#include "proxgrad/losses.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "proxgrad/rng.hpp"

namespace proxgrad {

namespace {

// log(1 + exp(z)) without overflow for large positive z
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// 1 / (1 + exp(-t)) evaluated from the side that cannot overflow
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

SmoothTerm least_squares_term(const LeastSquaresData& data) {
  if (data.A.rows() == 0 || data.A.cols() == 0) {
    throw std::invalid_argument("least_squares_term: empty matrix");
  }
  if (data.b.size() != data.A.rows()) {
    throw std::invalid_argument("least_squares_term: A rows and b length differ");
  }
  // shared immutable data keeps SmoothTerm copies cheap
  auto A = std::make_shared<const Matrix>(data.A);
  auto b = std::make_shared<const Vector>(data.b);
  SmoothTerm term;
  term.value = [A, b](const Vector& x) { return 0.5 * (*A * x - *b).squaredNorm(); };
  term.gradient = [A, b](const Vector& x) {
    return Vector(A->transpose() * (*A * x - *b));
  };
  term.lipschitz_bound = spectral_norm_sq(*A);
  return term;
}

SmoothTerm logistic_term(const LogisticData& data) {
  if (data.C.rows() == 0 || data.C.cols() == 0) {
    throw std::invalid_argument("logistic_term: empty matrix");
  }
  if (data.b.size() != data.C.rows()) {
    throw std::invalid_argument("logistic_term: C rows and b length differ");
  }
  bool seen_pos = false, seen_neg = false;
  for (Eigen::Index i = 0; i < data.b.size(); ++i) {
    if (data.b[i] == 1.0) {
      seen_pos = true;
    } else if (data.b[i] == -1.0) {
      seen_neg = true;
    } else {
      throw std::invalid_argument("logistic_term: labels must be -1 or +1");
    }
  }
  if (!(seen_pos && seen_neg)) {
    throw std::invalid_argument("logistic_term: labels must not all be identical");
  }
  auto C = std::make_shared<const Matrix>(data.C);
  auto b = std::make_shared<const Vector>(data.b);
  SmoothTerm term;
  term.value = [C, b](const Vector& x) {
    const Vector margins = *C * x;
    double total = 0.0;
    for (Eigen::Index i = 0; i < b->size(); ++i) total += log1p_exp(-(*b)[i] * margins[i]);
    return total;
  };
  term.gradient = [C, b](const Vector& x) {
    const Vector margins = *C * x;
    Vector w(b->size());
    for (Eigen::Index i = 0; i < b->size(); ++i) {
      w[i] = -(*b)[i] * sigmoid(-(*b)[i] * margins[i]);
    }
    return Vector(C->transpose() * w);
  };
  term.lipschitz_bound = 0.25 * spectral_norm_sq(*C);
  return term;
}

double spectral_norm_sq(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw std::invalid_argument("spectral_norm_sq: empty matrix");
  }
  Rng rng(0x5eedb0d5u);  // fixed stream so the estimate is reproducible
  Vector v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
  double vnorm = v.norm();
  if (vnorm == 0.0) v[0] = 1.0, vnorm = 1.0;
  v /= vnorm;

  double quotient = 0.0;
  for (int iter = 0; iter < 5000; ++iter) {
    const Vector w = m * v;
    const double next = w.squaredNorm();  // Rayleigh quotient of M^T M at unit v
    if (next == 0.0) return 0.0;
    if (iter > 0 && std::abs(next - quotient) < 1e-9 * next) return next;
    quotient = next;
    Vector u = m.transpose() * w;
    v = u / u.norm();
  }
  return quotient;
}

}  // namespace proxgrad
