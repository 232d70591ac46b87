#include "profex/dpot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "profex/errors.hpp"
#include "profex/stats.hpp"

namespace profex {

DataMatrix::DataMatrix(Matrix values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  const auto n = values_.rows();
  const auto d = values_.cols();
  if (d < 2) fail(ErrorKind::InvalidInput, "data needs at least two columns");
  if (n <= d) {
    fail(ErrorKind::SampleSize, "data has " + std::to_string(n) + " rows for " + std::to_string(d) +
                                    " columns; need more rows than columns");
  }
  if (!values_.allFinite()) fail(ErrorKind::InvalidInput, "data has non-finite entries");
  if (names_.empty()) {
    for (Eigen::Index k = 0; k < d; ++k) names_.push_back("x" + std::to_string(k + 1));
  } else if (names_.size() != static_cast<std::size_t>(d)) {
    fail(ErrorKind::InvalidInput, "column name count does not match the data");
  }
}

DataMatrix standardize_margins(const DataMatrix& data) {
  const Matrix& y = data.values();
  const double n1 = static_cast<double>(y.rows()) + 1.0;
  Matrix x(y.rows(), y.cols());
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    if (y.col(k).maxCoeff() == y.col(k).minCoeff()) {
      fail(ErrorKind::DegenerateMargin, "column '" + data.names()[static_cast<std::size_t>(k)] + "' is constant");
    }
    const Vector ranks = average_ranks(y.col(k));
    x.col(k) = -(1.0 - ranks.array() / n1).log();
  }
  return DataMatrix(std::move(x), data.names());
}

ExceedanceSet extract_exceedances(const Matrix& data_exp, double q, std::optional<std::size_t> min_exceedances) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidInput, "quantile level must lie in (0, 1)");
  if (data_exp.cols() < 2) fail(ErrorKind::InvalidInput, "data needs at least two columns");
  if (data_exp.rows() == 0) fail(ErrorKind::SampleSize, "no observations");
  if (!data_exp.allFinite()) fail(ErrorKind::InvalidInput, "data has non-finite entries");
  const auto d = static_cast<std::size_t>(data_exp.cols());
  const std::size_t needed = min_exceedances.value_or(d + 1);

  const Vector means = data_exp.rowwise().mean();
  ExceedanceSet set;
  set.q = q;
  set.r = empirical_quantile(std::vector<double>(means.data(), means.data() + means.size()), q);
  for (Eigen::Index i = 0; i < means.size(); ++i)
    if (means(i) >= set.r) set.rows.push_back(static_cast<std::size_t>(i));

  if (set.rows.size() < needed) {
    std::ostringstream os;
    os << "quantile " << q << " leaves " << set.rows.size() << " exceedances; need at least " << needed;
    fail(ErrorKind::SampleSize, os.str());
  }

  const auto k = static_cast<Eigen::Index>(set.rows.size());
  set.exceedances.resize(k, data_exp.cols());
  for (Eigen::Index j = 0; j < k; ++j) {
    set.exceedances.row(j) = data_exp.row(static_cast<Eigen::Index>(set.rows[static_cast<std::size_t>(j)])).array() - set.r;
  }
  set.profiles = set.exceedances;
  center_rows(set.profiles);
  return set;
}

HRFit fit_hr(const ExceedanceSet& exc, bool extended) {
  const Eigen::Index k = exc.profiles.rows();
  const Eigen::Index d = exc.profiles.cols();
  if (k <= d) {
    fail(ErrorKind::SampleSize, "fit needs more exceedances than dimensions (k = " + std::to_string(k) +
                                    ", d = " + std::to_string(d) + ")");
  }
  std::vector<std::string> warnings;

  const Matrix cov = apply_projector(sample_covariance(exc.profiles));
  const SymmetricEigen eig = symmetric_eigen(cov);
  const double tol = psd_tolerance(cov);
  Vector clamped = eig.values;
  double most_negative = 0.0;
  std::size_t rank = 0;
  for (Eigen::Index j = 0; j < clamped.size(); ++j) {
    if (clamped(j) < 0.0) {
      most_negative = std::min(most_negative, clamped(j));
      clamped(j) = 0.0;
    }
    if (clamped(j) > tol) ++rank;
  }
  if (most_negative < -tol) {
    std::ostringstream os;
    os << "sample covariance had eigenvalue " << most_negative << " below -" << tol << "; clamped to zero";
    warnings.push_back(os.str());
  }
  if (rank < static_cast<std::size_t>(d - 1)) {
    warnings.push_back("profile covariance has rank " + std::to_string(rank) + " < d - 1 = " + std::to_string(d - 1));
  }
  Matrix sigma = eig.vectors * clamped.asDiagonal() * eig.vectors.transpose();
  sigma = apply_projector(0.5 * (sigma + sigma.transpose()));
  HyperplaneCovariance sigma_hat(sigma, std::max(tol, psd_tolerance(sigma)));

  Vector mean = exc.profiles.colwise().mean().transpose();
  mean.array() -= mean.mean();
  ProfileVector mu_hat(std::move(mean));

  std::optional<double> discrepancy;
  if (!extended) discrepancy = (mu_hat.values() - mu_from_sigma(sigma_hat).values()).cwiseAbs().maxCoeff();

  Variogram gamma_hat = sigma_to_gamma(sigma_hat);
  return HRFit{std::move(gamma_hat), std::move(sigma_hat), std::move(mu_hat), static_cast<std::size_t>(k),
               exc.r, exc.q, rank, extended, discrepancy, most_negative, std::move(warnings)};
}

std::vector<StabilityRow> threshold_stability(const Matrix& data_exp, std::vector<double> q_list, bool extended) {
  std::sort(q_list.begin(), q_list.end());
  std::vector<StabilityRow> table;
  table.reserve(q_list.size());
  for (double q : q_list) {
    StabilityRow row;
    row.q = q;
    try {
      const ExceedanceSet exc = extract_exceedances(data_exp, q);
      row.r = exc.r;
      row.k = exc.rows.size();
      row.gamma_hat = fit_hr(exc, extended).gamma_hat.matrix();
    } catch (const Error& e) {
      row.error = e.what();
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace profex
