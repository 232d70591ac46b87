#pragma once

// Diagonal peaks-over-threshold: observations are thresholded on their
// component mean, and the centered exceedances estimate the profile law.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "profex/husler_reiss.hpp"
#include "profex/hyperplane.hpp"

namespace profex {

inline constexpr double kDefaultQuantile = 0.95;

/// Raw observations: n x d, finite, n > d >= 2.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values, std::vector<std::string> names = {});

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }

 private:
  Matrix values_;
  std::vector<std::string> names_;
};

/// Rank transform to the exponential scale, x = -log(1 - rank / (n + 1)),
/// with average ranks for ties. A constant column throws
/// ErrorKind::DegenerateMargin.
DataMatrix standardize_margins(const DataMatrix& data);

struct ExceedanceSet {
  double q = 0.0;              ///< quantile level of the row-mean threshold
  double r = 0.0;              ///< threshold on the exponential scale
  Matrix exceedances;          ///< x - r*1 for rows with mean(x) >= r
  Matrix profiles;             ///< centered exceedances
  std::vector<std::size_t> rows;  ///< source row indices
};

/// Keeps the rows whose mean reaches the empirical q-quantile of the row
/// means. Fewer than `min_exceedances` (default d + 1) survivors throws
/// ErrorKind::SampleSize.
ExceedanceSet extract_exceedances(const Matrix& data_exp, double q,
                                  std::optional<std::size_t> min_exceedances = {});

struct HRFit {
  Variogram gamma_hat;
  HyperplaneCovariance sigma_hat;
  ProfileVector mu_hat;
  std::size_t k = 0;
  double r = 0.0;
  double q = 0.0;
  std::size_t rank = 0;                   ///< rank of sigma_hat
  bool extended = false;
  std::optional<double> mean_link_discrepancy;  ///< max|mu_hat - mu_from_sigma(sigma_hat)|, non-extended fits
  double clamped_eigenvalue = 0.0;        ///< most negative eigenvalue removed by clamping
  std::vector<std::string> warnings;
};

/// Method-of-moments fit: sigma_hat is the projected sample covariance of the
/// profiles clamped to be PSD, mu_hat their sample mean. Needs k > d.
HRFit fit_hr(const ExceedanceSet& exc, bool extended = false);

struct StabilityRow {
  double q = 0.0;
  double r = 0.0;
  std::size_t k = 0;
  std::optional<Matrix> gamma_hat;
  std::string error;  ///< non-empty when this level failed
};

/// One fit per quantile level, sorted by level; failures are recorded per row.
std::vector<StabilityRow> threshold_stability(const Matrix& data_exp, std::vector<double> q_list,
                                              bool extended = false);

}  // namespace profex
