#pragma once

// Principal components of profile vectors. Every profile covariance has the
// diagonal direction 1/sqrt(d) as an eigenvector with eigenvalue 0; the other
// eigenvectors lie on the hyperplane, so truncating to the leading p of them
// yields another profile law, and p = 0 is complete dependence.

#include <cstddef>
#include <optional>
#include <vector>

#include "profex/husler_reiss.hpp"
#include "profex/hyperplane.hpp"

namespace profex {

enum class EigenSource { Model, Sample };

const char* to_string(EigenSource source) noexcept;

struct ProfileEigensystem {
  Vector eigenvalues;    ///< descending; the last belongs to 1/sqrt(d)
  Matrix eigenvectors;   ///< orthonormal columns, first nonzero coordinate positive
  EigenSource source = EigenSource::Model;
  Vector mean;           ///< model mean, or the sample mean
  Matrix centered;       ///< sample input minus its mean (empty for a model)
  /// Index groups (among the first d - 1) with numerically equal eigenvalues;
  /// only their span is determined.
  std::vector<std::vector<std::size_t>> degenerate_groups;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

ProfileEigensystem profile_pca(const HyperplaneCovariance& sigma, std::optional<ProfileVector> mean = {});
ProfileEigensystem profile_pca(const GaussianProfileLaw& law);
/// Sample version; rows must be profile vectors and there must be at least d.
ProfileEigensystem profile_pca_samples(const Matrix& samples);

struct TruncatedProfile {
  std::size_t rank = 0;
  HyperplaneCovariance sigma;    ///< sum_{k<=p} lambda_k v_k v_k'
  Vector mean_projected;         ///< mean projected onto the kept span
  double discarded_mean_norm = 0.0;
  ProfileVector mu_linked;          ///< mu_from_sigma(sigma), the Hüsler-Reiss-linked mean
  Matrix projected;              ///< sample input only: mean_projected + Pi_p (u - mean)
};

/// Keeps the leading p components, 0 <= p <= d - 1. Other p throws
/// ErrorKind::Parameter.
TruncatedProfile truncate_to_rank(const ProfileEigensystem& eig, std::size_t p);

/// Model: sum of discarded eigenvalues. Sample: mean squared residual norm of
/// the centered samples.
double reconstruction_error(const ProfileEigensystem& eig, std::size_t p);

}  // namespace profex
