#pragma once

#include <functional>
#include <vector>

#include "profex/hyperplane.hpp"

namespace profex {

/// 1-based ranks with ties sharing their average rank.
Vector average_ranks(const Vector& column);

/// Linearly interpolated sample quantile (the "type 7" definition).
double empirical_quantile(std::vector<double> values, double q);

/// sup_x |F_n(x) - F(x)| for a continuous reference F.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);
/// sup_x |F_n(x) - G_m(x)| between two samples.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Sample covariance with divisor n - 1 of the rows of `rows`.
Matrix sample_covariance(const Matrix& rows);

/// Row maxima as a std::vector.
std::vector<double> row_maxima(const Matrix& rows);

}  // namespace profex
