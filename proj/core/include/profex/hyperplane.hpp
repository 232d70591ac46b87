#pragma once

// Linear algebra on the hyperplane orthogonal to the diagonal vector 1:
// centering, the projector P = I - 11'/d, and validity of variograms and of
// covariance matrices supported on that hyperplane.

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace profex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Zero-sum tolerance for profile vectors, applied per component and scaled by
/// max(1, max|x_k|).
inline constexpr double kCenterTolerance = 1e-12;
/// Relative eigenvalue tolerance: tol_psd = kPsdRelativeTolerance * max|M_ij|.
inline constexpr double kPsdRelativeTolerance = 1e-10;

double max_abs(const Matrix& m);
double psd_tolerance(const Matrix& m, double relative = kPsdRelativeTolerance);

/// Ambient dimension, at least 2.
class Dimension {
 public:
  explicit Dimension(std::size_t d);
  std::size_t value() const noexcept { return d_; }
  Eigen::Index index() const noexcept { return static_cast<Eigen::Index>(d_); }

 private:
  std::size_t d_;
};

/// A finite point of the hyperplane: its components sum to zero.
class ProfileVector {
 public:
  explicit ProfileVector(Vector values, double tol_center = kCenterTolerance);

  static ProfileVector zero(Dimension d);

  const Vector& values() const noexcept { return values_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](Eigen::Index k) const { return values_(k); }
  double max() const { return values_.maxCoeff(); }

 private:
  Vector values_;
};

/// x - mean(x) * 1.
ProfileVector center(const Vector& x);
/// Centers every row of `rows` in place.
void center_rows(Matrix& rows);

/// Returns P * m * P, computed by removing row and column means.
Matrix apply_projector(const Matrix& m);

struct ValidityReport {
  bool valid = true;
  std::string diagnostic;  ///< first violated condition, empty when valid
  explicit operator bool() const noexcept { return valid; }
};

/// Symmetric, zero diagonal, nonnegative, and -P*gamma*P/2 positive
/// semidefinite. `tol_psd` defaults to psd_tolerance(gamma).
ValidityReport is_valid_variogram(const Matrix& gamma, std::optional<double> tol_psd = {});
/// Symmetric, positive semidefinite and annihilating 1.
ValidityReport is_valid_hyperplane_covariance(const Matrix& sigma,
                                              std::optional<double> tol_psd = {});

/// Variogram matrix of a Hüsler-Reiss model. Construction validates and
/// throws ErrorKind::Parameter naming the violated condition.
class Variogram {
 public:
  explicit Variogram(const Matrix& entries, std::optional<double> tol_psd = {});

  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

/// Covariance of a law supported on the hyperplane (sigma * 1 = 0).
class HyperplaneCovariance {
 public:
  explicit HyperplaneCovariance(const Matrix& entries, std::optional<double> tol_psd = {});

  static HyperplaneCovariance zero(Dimension d);

  const Matrix& matrix() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

/// Eigenvalues in ascending order with matching eigenvector columns.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& m);

/// Orthonormal basis of the hyperplane (Helmert contrasts), d x (d-1).
Matrix hyperplane_basis(Eigen::Index d);

}  // namespace profex
