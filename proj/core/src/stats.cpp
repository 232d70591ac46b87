#include "profex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "profex/errors.hpp"

namespace profex {

Vector average_ranks(const Vector& column) {
  const auto n = static_cast<std::size_t>(column.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return column(static_cast<Eigen::Index>(a)) < column(static_cast<Eigen::Index>(b));
  });
  Vector ranks(column.size());
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && column(static_cast<Eigen::Index>(order[j + 1])) == column(static_cast<Eigen::Index>(order[i]))) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks(static_cast<Eigen::Index>(order[k])) = rank;
    i = j + 1;
  }
  return ranks;
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorKind::InvalidInput, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorKind::InvalidInput, "quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) fail(ErrorKind::InvalidInput, "KS distance of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorKind::InvalidInput, "KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

Matrix sample_covariance(const Matrix& rows) {
  if (rows.rows() < 2) fail(ErrorKind::SampleSize, "sample covariance needs at least two rows");
  const Matrix centered = rows.rowwise() - rows.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(rows.rows() - 1);
}

std::vector<double> row_maxima(const Matrix& rows) {
  std::vector<double> out(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out[static_cast<std::size_t>(i)] = rows.row(i).maxCoeff();
  return out;
}

}  // namespace profex
