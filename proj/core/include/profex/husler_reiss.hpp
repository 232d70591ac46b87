#pragma once

// Hüsler-Reiss models as Gaussian laws on the hyperplane.
//
// A variogram gamma maps to the profile covariance sigma = -P*gamma*P/2 and the
// profile mean mu = -(diag(sigma) - mean(diag(sigma)) * 1)/2. Relaxing the link
// between mu and sigma ("extended" laws) gives every Gaussian law on the
// hyperplane.

#include <cstddef>
#include <cstdint>

#include "profex/hyperplane.hpp"
#include "profex/rng.hpp"

namespace profex {

HyperplaneCovariance gamma_to_sigma(const Variogram& gamma);
/// gamma_ij = sigma_ii + sigma_jj - 2 sigma_ij.
Variogram sigma_to_gamma(const HyperplaneCovariance& sigma);
ProfileVector mu_from_sigma(const HyperplaneCovariance& sigma);

/// Tolerance for the mean/covariance link of non-extended laws.
inline constexpr double kMeanLinkTolerance = 1e-10;

class GaussianProfileLaw {
 public:
  /// Throws ErrorKind::Parameter when `extended` is false and `mu` differs
  /// from mu_from_sigma(sigma) by more than kMeanLinkTolerance.
  GaussianProfileLaw(ProfileVector mu, HyperplaneCovariance sigma, bool extended);

  static GaussianProfileLaw husler_reiss(const Variogram& gamma);
  static GaussianProfileLaw husler_reiss(const HyperplaneCovariance& sigma);

  const ProfileVector& mu() const noexcept { return mu_; }
  const HyperplaneCovariance& sigma() const noexcept { return sigma_; }
  bool extended() const noexcept { return extended_; }
  std::size_t dim() const noexcept { return mu_.dim(); }

  /// d x r factor with factor * factor' = sigma, built from the eigenvectors
  /// whose eigenvalues exceed tol_psd. r may be zero.
  const Matrix& factor() const noexcept { return factor_; }

  /// One draw mu + factor * g, recentered onto the hyperplane.
  void draw(Rng& rng, Eigen::Ref<Vector> out) const;

 private:
  ProfileVector mu_;
  HyperplaneCovariance sigma_;
  bool extended_;
  Matrix factor_;
};

/// n draws as the rows of an n x d matrix. Deterministic given `seed`.
Matrix sample_gaussian_profile(const GaussianProfileLaw& law, std::size_t n, std::uint64_t seed);

}  // namespace profex
