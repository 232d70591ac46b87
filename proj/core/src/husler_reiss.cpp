#include "profex/husler_reiss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "profex/errors.hpp"

namespace profex {

HyperplaneCovariance gamma_to_sigma(const Variogram& gamma) {
  Matrix sigma = -0.5 * apply_projector(gamma.matrix());
  // Tolerance follows the variogram scale; sigma entries can be much smaller.
  return HyperplaneCovariance(sigma, psd_tolerance(gamma.matrix()));
}

Variogram sigma_to_gamma(const HyperplaneCovariance& sigma) {
  const Matrix& s = sigma.matrix();
  const Vector diag = s.diagonal();
  const auto d = s.rows();
  Matrix gamma(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) gamma(i, j) = i == j ? 0.0 : diag(i) + diag(j) - 2.0 * s(i, j);
  return Variogram(gamma, psd_tolerance(s) * 4.0);
}

ProfileVector mu_from_sigma(const HyperplaneCovariance& sigma) {
  const Vector diag = sigma.matrix().diagonal();
  Vector mu = -0.5 * (diag.array() - diag.mean()).matrix();
  return ProfileVector(std::move(mu));
}

GaussianProfileLaw::GaussianProfileLaw(ProfileVector mu, HyperplaneCovariance sigma, bool extended)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), extended_(extended) {
  if (mu_.dim() != sigma_.dim()) {
    fail(ErrorKind::Parameter, "mean has dimension " + std::to_string(mu_.dim()) +
                                   " but covariance has dimension " + std::to_string(sigma_.dim()));
  }
  if (!extended_) {
    const double gap = (mu_.values() - mu_from_sigma(sigma_).values()).cwiseAbs().maxCoeff();
    if (gap > kMeanLinkTolerance) {
      std::ostringstream os;
      os << "mean differs from the Hüsler-Reiss value by " << gap << "; mark the law extended to decouple them";
      fail(ErrorKind::Parameter, os.str());
    }
  }

  const SymmetricEigen eig = symmetric_eigen(sigma_.matrix());
  const double tol = psd_tolerance(sigma_.matrix());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k)
    if (eig.values(k) > tol) kept.push_back(k);
  factor_.resize(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const auto k = kept[c];
    Vector v = eig.vectors.col(k);
    v.array() -= v.mean();  // exact orthogonality to 1
    factor_.col(static_cast<Eigen::Index>(c)) = std::sqrt(eig.values(k)) * v;
  }
}

GaussianProfileLaw GaussianProfileLaw::husler_reiss(const Variogram& gamma) {
  return husler_reiss(gamma_to_sigma(gamma));
}

GaussianProfileLaw GaussianProfileLaw::husler_reiss(const HyperplaneCovariance& sigma) {
  return GaussianProfileLaw(mu_from_sigma(sigma), sigma, false);
}

void GaussianProfileLaw::draw(Rng& rng, Eigen::Ref<Vector> out) const {
  out = mu_.values();
  for (Eigen::Index c = 0; c < factor_.cols(); ++c) out += rng.normal() * factor_.col(c);
  out.array() -= out.mean();
}

Matrix sample_gaussian_profile(const GaussianProfileLaw& law, std::size_t n, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(law.dim());
  Matrix out(static_cast<Eigen::Index>(n), d);
  Vector row(d);
  for (std::size_t start = 0, chunk = 0; start < n; start += kChunkSize, ++chunk) {
    Rng rng(split_seed(seed, chunk));
    const std::size_t stop = std::min(n, start + kChunkSize);
    for (std::size_t i = start; i < stop; ++i) {
      law.draw(rng, row);
      const double scale = std::max(1.0, row.cwiseAbs().maxCoeff());
      if (std::abs(row.sum()) > static_cast<double>(d) * kCenterTolerance * scale) {
        fail(ErrorKind::Numeric, "Gaussian profile draw left the hyperplane");
      }
      out.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
  }
  return out;
}

}  // namespace profex
