#include "profex/hyperplane.hpp"

#include <cmath>
#include <sstream>

#include "profex/errors.hpp"

namespace profex {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double psd_tolerance(const Matrix& m, double relative) { return relative * max_abs(m); }

Dimension::Dimension(std::size_t d) : d_(d) {
  if (d < 2) fail(ErrorKind::InvalidInput, "dimension must be at least 2, got " + std::to_string(d));
}

ProfileVector::ProfileVector(Vector values, double tol_center) : values_(std::move(values)) {
  const auto d = values_.size();
  if (d < 2) fail(ErrorKind::InvalidInput, "profile vector needs at least 2 components");
  if (!values_.allFinite()) fail(ErrorKind::InvalidInput, "profile vector has non-finite entries");
  const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
  const double sum = values_.sum();
  if (std::abs(sum) > static_cast<double>(d) * tol_center * scale) {
    std::ostringstream os;
    os << "profile vector components sum to " << sum << ", not zero";
    fail(ErrorKind::InvalidInput, os.str());
  }
}

ProfileVector ProfileVector::zero(Dimension d) { return ProfileVector(Vector::Zero(d.index())); }

ProfileVector center(const Vector& x) {
  if (x.size() < 2) fail(ErrorKind::InvalidInput, "center needs a vector of length at least 2");
  if (!x.allFinite()) fail(ErrorKind::InvalidInput, "center: non-finite input");
  Vector out = x.array() - x.mean();
  return ProfileVector(std::move(out));
}

void center_rows(Matrix& rows) { rows.colwise() -= rows.rowwise().mean(); }

Matrix apply_projector(const Matrix& m) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::InvalidInput, "projector needs a square matrix, got " +
                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) fail(ErrorKind::InvalidInput, "projector: non-finite matrix entries");
  Matrix out = m;
  out.rowwise() -= out.colwise().mean();
  out.colwise() -= out.rowwise().mean();
  return out;
}

namespace {

ValidityReport invalid(std::string why) { return {false, std::move(why)}; }

std::string entry(const char* what, Eigen::Index i, Eigen::Index j, double value) {
  std::ostringstream os;
  os << what << " at (" << i << "," << j << "): " << value;
  return os.str();
}

ValidityReport check_square_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return invalid("matrix is not square");
  if (m.rows() < 2) return invalid("dimension must be at least 2");
  if (!m.allFinite()) return invalid("matrix has non-finite entries");
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return invalid(entry("not symmetric", i, j, m(i, j) - m(j, i)));
  return {};
}

}  // namespace

ValidityReport is_valid_variogram(const Matrix& gamma, std::optional<double> tol_psd) {
  const double tol = tol_psd.value_or(psd_tolerance(gamma));
  if (auto r = check_square_symmetric(gamma, tol); !r) return r;
  for (Eigen::Index i = 0; i < gamma.rows(); ++i)
    if (std::abs(gamma(i, i)) > tol) return invalid(entry("nonzero diagonal", i, i, gamma(i, i)));
  for (Eigen::Index i = 0; i < gamma.rows(); ++i)
    for (Eigen::Index j = 0; j < gamma.cols(); ++j)
      if (gamma(i, j) < -tol) return invalid(entry("negative entry", i, j, gamma(i, j)));
  const Matrix sigma = -0.5 * apply_projector(0.5 * (gamma + gamma.transpose()));
  const double min_eig = symmetric_eigen(sigma).values(0);
  if (min_eig < -tol) {
    std::ostringstream os;
    os << "not conditionally negative definite: -P*gamma*P/2 has eigenvalue " << min_eig;
    return invalid(os.str());
  }
  return {};
}

ValidityReport is_valid_hyperplane_covariance(const Matrix& sigma, std::optional<double> tol_psd) {
  const double tol = tol_psd.value_or(psd_tolerance(sigma));
  if (auto r = check_square_symmetric(sigma, tol); !r) return r;
  const Vector row_sums = sigma.rowwise().sum();
  for (Eigen::Index i = 0; i < row_sums.size(); ++i) {
    if (std::abs(row_sums(i)) > tol) {
      std::ostringstream os;
      os << "row " << i << " sums to " << row_sums(i) << ", covariance must annihilate 1";
      return invalid(os.str());
    }
  }
  const double min_eig = symmetric_eigen(0.5 * (sigma + sigma.transpose())).values(0);
  if (min_eig < -tol) {
    std::ostringstream os;
    os << "not positive semidefinite: eigenvalue " << min_eig;
    return invalid(os.str());
  }
  return {};
}

Variogram::Variogram(const Matrix& entries, std::optional<double> tol_psd) {
  if (auto r = is_valid_variogram(entries, tol_psd); !r) fail(ErrorKind::Parameter, "invalid variogram: " + r.diagnostic);
  entries_ = 0.5 * (entries + entries.transpose());
  entries_.diagonal().setZero();
}

HyperplaneCovariance::HyperplaneCovariance(const Matrix& entries, std::optional<double> tol_psd) {
  if (auto r = is_valid_hyperplane_covariance(entries, tol_psd); !r) {
    fail(ErrorKind::Parameter, "invalid hyperplane covariance: " + r.diagnostic);
  }
  entries_ = 0.5 * (entries + entries.transpose());
}

HyperplaneCovariance HyperplaneCovariance::zero(Dimension d) {
  return HyperplaneCovariance(Matrix::Zero(d.index(), d.index()));
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Numeric, "symmetric eigen-solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix hyperplane_basis(Eigen::Index d) {
  Matrix basis = Matrix::Zero(d, d - 1);
  for (Eigen::Index k = 1; k < d; ++k) {
    const double kd = static_cast<double>(k);
    const double norm = std::sqrt(kd * (kd + 1.0));
    basis.col(k - 1).head(k).setConstant(1.0 / norm);
    basis(k, k - 1) = -kd / norm;
  }
  return basis;
}

}  // namespace profex
