#pragma once

#include <cmath>
#include <vector>

#include "profex/hyperplane.hpp"
#include "profex/rng.hpp"

namespace profex::testing {

// Variogram of W = A g for a random d x k matrix A: gamma_ij = |A_i. - A_j.|^2.
inline Matrix random_variogram(Rng& rng, Eigen::Index d, Eigen::Index k, double scale = 1.0) {
  Matrix a(d, k);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = scale * rng.normal();
  Matrix gamma(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) gamma(i, j) = (a.row(i) - a.row(j)).squaredNorm();
  return gamma;
}

inline Matrix worked_gamma() {
  Matrix g(3, 3);
  g << 0, 1, 4, 1, 0, 5, 4, 5, 0;
  return g;
}

inline Matrix worked_sigma() {
  Matrix s(3, 3);
  s << 5, 2, -7, 2, 8, -10, -7, -10, 17;
  return s / 9.0;
}

// Covariance of W = (0, N, 2M) centered along the diagonal, built directly:
// cov(W) = diag(0, 1, 4), centering subtracts row and column means.
inline Matrix worked_sigma_from_generator() {
  Matrix cov = Matrix::Zero(3, 3);
  cov(1, 1) = 1.0;
  cov(2, 2) = 4.0;
  Matrix c = Matrix::Identity(3, 3) - Matrix::Constant(3, 3, 1.0 / 3.0);
  return c * cov * c;
}

inline Matrix two_point_gamma(double g) {
  Matrix m(2, 2);
  m << 0, g, g, 0;
  return m;
}

inline Matrix equi_gamma(Eigen::Index d, double g) {
  return g * (Matrix::Ones(d, d) - Matrix::Identity(d, d));
}

inline Matrix projector(Eigen::Index d) {
  return Matrix::Identity(d, d) - Matrix::Constant(d, d, 1.0 / static_cast<double>(d));
}

// d = 2 generator law whose maximum is Exp(rate): T = +/- (Y, -Y) with Y ~ Exp(rate).
inline Vector exp_max_generator(Rng& rng, double rate) {
  const double y = rng.exponential() / rate;
  Vector t(2);
  if (rng.uniform() < 0.5) t << y, -y;
  else t << -y, y;
  return t;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double standard_error(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace profex::testing
