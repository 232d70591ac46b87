#include "profex/tail_pca.hpp"

#include <cmath>

#include "profex/errors.hpp"
#include "profex/stats.hpp"

namespace profex {

const char* to_string(EigenSource source) noexcept {
  return source == EigenSource::Model ? "model" : "sample";
}

namespace {

// Eigen-decomposition restricted to the hyperplane basis, with 1/sqrt(d)
// appended as the final eigenvector.
ProfileEigensystem decompose(const Matrix& sigma) {
  const Eigen::Index d = sigma.rows();
  const Matrix basis = hyperplane_basis(d);
  const SymmetricEigen inner = symmetric_eigen(basis.transpose() * sigma * basis);
  const double tol = psd_tolerance(sigma);

  ProfileEigensystem out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(d, d);
  for (Eigen::Index k = 0; k < d - 1; ++k) {
    const Eigen::Index src = d - 2 - k;  // ascending -> descending
    double lambda = inner.values(src);
    if (lambda < 0.0) {
      if (lambda < -tol) fail(ErrorKind::Numeric, "profile covariance has a negative eigenvalue");
      lambda = 0.0;
    }
    out.eigenvalues(k) = lambda;
    out.eigenvectors.col(k) = basis * inner.vectors.col(src);
  }
  const Vector diagonal = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  out.eigenvalues(d - 1) = std::max(0.0, diagonal.dot(sigma * diagonal));
  out.eigenvectors.col(d - 1) = diagonal;

  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double c = out.eigenvectors(i, k);
      if (std::abs(c) > 1e-12) {
        if (c < 0.0) out.eigenvectors.col(k) *= -1.0;
        break;
      }
    }
  }

  const double tie_tol = std::max(tol, 1e-12 * std::max(1.0, out.eigenvalues(0)));
  for (Eigen::Index k = 0; k < d - 1;) {
    Eigen::Index j = k;
    while (j + 1 < d - 1 && out.eigenvalues(k) - out.eigenvalues(j + 1) <= tie_tol) ++j;
    if (j > k) {
      std::vector<std::size_t> group;
      for (Eigen::Index g = k; g <= j; ++g) group.push_back(static_cast<std::size_t>(g));
      out.degenerate_groups.push_back(std::move(group));
    }
    k = j + 1;
  }
  return out;
}

}  // namespace

ProfileEigensystem profile_pca(const HyperplaneCovariance& sigma, std::optional<ProfileVector> mean) {
  ProfileEigensystem out = decompose(sigma.matrix());
  out.source = EigenSource::Model;
  const auto d = static_cast<Eigen::Index>(sigma.dim());
  if (mean && mean->dim() != sigma.dim()) fail(ErrorKind::InvalidInput, "mean and covariance dimensions differ");
  out.mean = mean ? mean->values() : Vector::Zero(d);
  return out;
}

ProfileEigensystem profile_pca(const GaussianProfileLaw& law) { return profile_pca(law.sigma(), law.mu()); }

ProfileEigensystem profile_pca_samples(const Matrix& samples) {
  const Eigen::Index d = samples.cols();
  if (d < 2) fail(ErrorKind::InvalidInput, "samples need at least two columns");
  if (samples.rows() < d) {
    fail(ErrorKind::SampleSize, "PCA needs at least d = " + std::to_string(d) + " samples");
  }
  for (Eigen::Index i = 0; i < samples.rows(); ++i) ProfileVector check(samples.row(i).transpose());

  Matrix cov = apply_projector(sample_covariance(samples));
  ProfileEigensystem out = decompose(0.5 * (cov + cov.transpose()));
  out.source = EigenSource::Sample;
  out.mean = samples.colwise().mean().transpose();
  out.centered = samples.rowwise() - out.mean.transpose();
  return out;
}

namespace {

void check_rank(const ProfileEigensystem& eig, std::size_t p) {
  if (p + 1 > eig.dim()) {
    fail(ErrorKind::Parameter, "rank " + std::to_string(p) + " out of range 0.." + std::to_string(eig.dim() - 1));
  }
}

Matrix kept_projector(const ProfileEigensystem& eig, std::size_t p) {
  const Matrix kept = eig.eigenvectors.leftCols(static_cast<Eigen::Index>(p));
  return kept * kept.transpose();
}

}  // namespace

TruncatedProfile truncate_to_rank(const ProfileEigensystem& eig, std::size_t p) {
  check_rank(eig, p);
  const auto kp = static_cast<Eigen::Index>(p);
  const Matrix kept = eig.eigenvectors.leftCols(kp);
  Matrix sigma = kept * eig.eigenvalues.head(kp).asDiagonal() * kept.transpose();
  sigma = apply_projector(0.5 * (sigma + sigma.transpose()));
  HyperplaneCovariance sigma_p(sigma, std::max(psd_tolerance(sigma), 1e-14 * std::max(1.0, eig.eigenvalues(0))));

  const Matrix projector = kept_projector(eig, p);
  Vector mean_projected = projector * eig.mean;
  const double discarded = (eig.mean - mean_projected).norm();
  ProfileVector mu_linked = mu_from_sigma(sigma_p);

  Matrix projected;
  if (eig.source == EigenSource::Sample) {
    projected = eig.centered * projector;  // projector is symmetric
    projected.rowwise() += mean_projected.transpose();
  }
  return TruncatedProfile{p, std::move(sigma_p), std::move(mean_projected), discarded, std::move(mu_linked),
                          std::move(projected)};
}

double reconstruction_error(const ProfileEigensystem& eig, std::size_t p) {
  check_rank(eig, p);
  if (eig.source == EigenSource::Model) return eig.eigenvalues.tail(eig.eigenvalues.size() - static_cast<Eigen::Index>(p)).sum();
  const Matrix residual = eig.centered - eig.centered * kept_projector(eig, p);
  return residual.squaredNorm() / static_cast<double>(eig.centered.rows());
}

}  // namespace profex
