#include "profex/max_link.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "profex/errors.hpp"

namespace profex {

namespace {

std::vector<double> uniform_grid(double step, double s_max) {
  if (!(step > 0.0) || !std::isfinite(step)) fail(ErrorKind::InvalidInput, "grid step must be positive");
  if (!(s_max > 0.0) || !std::isfinite(s_max)) fail(ErrorKind::InvalidInput, "grid end must be positive");
  const auto intervals = static_cast<std::size_t>(std::ceil(s_max / step - 1e-9));
  std::vector<double> grid(intervals + 1);
  for (std::size_t j = 0; j <= intervals; ++j) grid[j] = static_cast<double>(j) * step;
  return grid;
}

void check_grid(const std::vector<double>& grid, std::size_t n_values) {
  if (grid.size() < 2) fail(ErrorKind::InvalidInput, "a table needs at least two grid points");
  if (grid.size() != n_values) fail(ErrorKind::InvalidInput, "grid and values differ in length");
  if (grid.front() != 0.0) fail(ErrorKind::InvalidInput, "grid must start at 0");
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1]) || !std::isfinite(grid[j])) {
      fail(ErrorKind::InvalidInput, "grid must be finite and strictly increasing");
    }
  }
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double s, double below) {
  if (s < grid.front()) return below;
  if (s >= grid.back()) return values.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), s) - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (s - grid[lo]) / (grid[hi] - grid[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

// Cumulative trapezoid: out[j] = int_{grid[0]}^{grid[j]} f.
std::vector<double> cumulative_trapezoid(const std::vector<double>& grid, const std::vector<double>& f) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t j = 1; j < grid.size(); ++j) out[j] = out[j - 1] + 0.5 * (grid[j] - grid[j - 1]) * (f[j] + f[j - 1]);
  return out;
}

// Share of the final integral accumulated on the upper tail window.
double tail_share(const std::vector<double>& grid, const std::vector<double>& cumulative) {
  const double total = cumulative.back();
  if (!(total > 0.0)) return 0.0;
  const double start = (1.0 - kTailWindowFraction) * grid.back();
  const double at_start = interpolate(grid, cumulative, start, 0.0);
  return (total - at_start) / total;
}

struct Cleaned {
  std::vector<double> values;
  double adjustment = 0.0;
};

Cleaned clamp_and_isotonize(const std::vector<double>& raw) {
  std::vector<double> clamped(raw.size());
  std::transform(raw.begin(), raw.end(), clamped.begin(), [](double v) { return std::clamp(v, 0.0, 1.0); });
  Cleaned out{isotonic_fit(clamped), 0.0};
  for (std::size_t j = 0; j < raw.size(); ++j) out.adjustment = std::max(out.adjustment, std::abs(out.values[j] - raw[j]));
  return out;
}

void require_small_cleanup(double cleanup, const char* what) {
  if (cleanup > kMaxCleanup) {
    std::ostringstream os;
    os << what << " output needed a monotonicity correction of " << cleanup << " (limit " << kMaxCleanup
       << "); refine the grid";
    fail(ErrorKind::GridResolution, os.str());
  }
}

}  // namespace

TabulatedCDF::TabulatedCDF(std::vector<double> grid, std::vector<double> values, double tail_mass_tol)
    : grid_(std::move(grid)), values_(std::move(values)), tail_mass_tol_(tail_mass_tol) {
  check_grid(grid_, values_.size());
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double v = values_[j];
    if (!std::isfinite(v) || v < -kMonotoneSlack || v > 1.0 + kMonotoneSlack) {
      fail(ErrorKind::InvalidInput, "distribution function values must lie in [0, 1]");
    }
    if (j > 0 && v < values_[j - 1] - kMonotoneSlack) {
      std::ostringstream os;
      os << "distribution function decreases at s = " << grid_[j];
      fail(ErrorKind::InvalidInput, os.str());
    }
  }
  if (1.0 - values_.back() > tail_mass_tol_) {
    std::ostringstream os;
    os << "table leaves mass " << 1.0 - values_.back() << " beyond s = " << grid_.back() << " (tolerance "
       << tail_mass_tol_ << ")";
    fail(ErrorKind::InvalidInput, os.str());
  }
}

TabulatedCDF TabulatedCDF::on_grid(const std::function<double(double)>& cdf, double step, double s_max,
                                   double tail_mass_tol) {
  std::vector<double> grid = uniform_grid(step, s_max);
  std::vector<double> values(grid.size());
  std::transform(grid.begin(), grid.end(), values.begin(), cdf);
  return TabulatedCDF(std::move(grid), std::move(values), tail_mass_tol);
}

TabulatedCDF TabulatedCDF::tabulate(const std::function<double(double)>& cdf, double step, double tail_mass_tol,
                                    double s_max_limit) {
  double s_max = 1.0;
  while (1.0 - cdf(s_max) > tail_mass_tol) {
    s_max *= 2.0;
    if (s_max > s_max_limit) fail(ErrorKind::InvalidInput, "distribution tail does not fall below the tolerance");
  }
  return on_grid(cdf, step, s_max, tail_mass_tol);
}

TabulatedCDF TabulatedCDF::empirical(std::vector<double> samples, double step) {
  if (samples.empty()) fail(ErrorKind::InvalidInput, "empirical table needs samples");
  std::sort(samples.begin(), samples.end());
  if (samples.front() < 0.0) fail(ErrorKind::InvalidInput, "maxima of hyperplane vectors are nonnegative");
  if (!std::isfinite(samples.back())) fail(ErrorKind::InvalidInput, "samples must be finite");
  std::vector<double> grid = uniform_grid(step, samples.back() + step);
  std::vector<double> values(grid.size());
  const double n = static_cast<double>(samples.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    values[j] = static_cast<double>(std::upper_bound(samples.begin(), samples.end(), grid[j]) - samples.begin()) / n;
  }
  return TabulatedCDF(std::move(grid), std::move(values), 0.0);
}

double TabulatedCDF::operator()(double s) const { return interpolate(grid_, values_, s, 0.0); }

TabulatedDensity::TabulatedDensity(std::vector<double> grid, std::vector<double> values, double tol_norm)
    : grid_(std::move(grid)), values_(std::move(values)), tol_norm_(tol_norm) {
  check_grid(grid_, values_.size());
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) fail(ErrorKind::InvalidInput, "density values must be finite and nonnegative");
  }
  const double mass = integral();
  if (std::abs(mass - 1.0) > tol_norm_) {
    std::ostringstream os;
    os << "density integrates to " << mass << " on the grid (tolerance " << tol_norm_ << ")";
    fail(ErrorKind::GridResolution, os.str());
  }
}

TabulatedDensity TabulatedDensity::on_grid(const std::function<double(double)>& density, double step, double s_max,
                                           double tol_norm) {
  std::vector<double> grid = uniform_grid(step, s_max);
  std::vector<double> values(grid.size());
  std::transform(grid.begin(), grid.end(), values.begin(), density);
  return TabulatedDensity(std::move(grid), std::move(values), tol_norm);
}

double TabulatedDensity::integral() const { return cumulative_trapezoid(grid_, values_).back(); }

double TabulatedDensity::operator()(double s) const {
  return s > grid_.back() ? 0.0 : interpolate(grid_, values_, s, 0.0);
}

double expected_exp_minus_max(const TabulatedCDF& f_t) {
  const auto& grid = f_t.grid();
  const auto& values = f_t.values();
  std::vector<double> integrand(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) integrand[j] = values[j] * std::exp(-grid[j]);
  return cumulative_trapezoid(grid, integrand).back() + std::exp(-grid.back()) * values.back();
}

ExpMaxMoment expected_exp_max(const TabulatedCDF& f_u) {
  const auto& grid = f_u.grid();
  const auto& values = f_u.values();
  std::vector<double> integrand(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) integrand[j] = (1.0 - values[j]) * std::exp(grid[j]);
  const std::vector<double> cumulative = cumulative_trapezoid(grid, integrand);
  ExpMaxMoment out;
  out.value = 1.0 + cumulative.back();
  out.tail_share = tail_share(grid, cumulative);
  out.diverging = out.tail_share > kTailWindowShare;
  return out;
}

LinkResult maxu_cdf_from_maxt(const TabulatedCDF& f_t) {
  const auto& grid = f_t.grid();
  const auto& values = f_t.values();
  std::vector<double> integrand(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) integrand[j] = values[j] * std::exp(-grid[j]);
  const std::vector<double> cumulative = cumulative_trapezoid(grid, integrand);

  const double normalizer = cumulative.back() + std::exp(-grid.back()) * values.back();
  if (!(normalizer > kNormalizerFloor)) {
    std::ostringstream os;
    os << "E[exp(-max(T))] = " << normalizer << " is below " << kNormalizerFloor;
    fail(ErrorKind::DegenerateLaw, os.str());
  }

  std::vector<double> raw(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) raw[j] = (cumulative[j] + std::exp(-grid[j]) * values[j]) / normalizer;
  Cleaned cleaned = clamp_and_isotonize(raw);
  require_small_cleanup(cleaned.adjustment, "max(U) transform");

  const double tail_tol = std::max(f_t.tail_mass_tol(), 1.0 - cleaned.values.back());
  return LinkResult{TabulatedCDF(grid, std::move(cleaned.values), tail_tol), normalizer, cleaned.adjustment, false, {}};
}

LinkResult maxt_cdf_from_maxu(const TabulatedCDF& f_u) {
  const auto& grid = f_u.grid();
  const auto& values = f_u.values();
  std::vector<double> integrand(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) integrand[j] = (1.0 - values[j]) * std::exp(grid[j]);
  const std::vector<double> cumulative = cumulative_trapezoid(grid, integrand);
  const double normalizer = 1.0 + cumulative.back();

  // e^s F_U(s) - int_0^s F_U e^t dt, rewritten as 1 + C(s) - e^s (1 - F_U(s)).
  std::vector<double> raw(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) raw[j] = (1.0 + cumulative[j] - integrand[j]) / normalizer;
  Cleaned cleaned = clamp_and_isotonize(raw);
  require_small_cleanup(cleaned.adjustment, "max(T) transform");

  LinkResult result{TabulatedCDF(grid, cleaned.values, std::max(f_u.tail_mass_tol(), 1.0 - cleaned.values.back())),
                    normalizer, cleaned.adjustment, false, {}};
  const double share = tail_share(grid, cumulative);
  if (share > kTailWindowShare) {
    std::ostringstream os;
    os << "E[exp(max(U))] integrand is not decaying: last " << kTailWindowFraction * 100.0
       << "% of the grid carries " << share * 100.0 << "% of it; the moment may be infinite";
    result.tail_flag = true;
    result.warnings.push_back(os.str());
  }
  return result;
}

DensityLinkResult density_transform(const TabulatedDensity& f_in, TiltDirection direction) {
  const auto& grid = f_in.grid();
  const double sign = direction == TiltDirection::TtoU ? -1.0 : 1.0;
  std::vector<double> tilted(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) tilted[j] = f_in.values()[j] * std::exp(sign * grid[j]);
  const std::vector<double> cumulative = cumulative_trapezoid(grid, tilted);
  const double normalizer = cumulative.back();
  if (!(normalizer > kNormalizerFloor) || !std::isfinite(normalizer)) {
    fail(ErrorKind::DegenerateLaw, "tilted density cannot be normalized on the grid");
  }
  for (double& v : tilted) v /= normalizer;

  DensityLinkResult result{TabulatedDensity(grid, std::move(tilted), f_in.tol_norm()), normalizer, false, {}};
  if (direction == TiltDirection::UtoT) {
    const double share = tail_share(grid, cumulative);
    if (share > kTailWindowShare) {
      result.tail_flag = true;
      result.warnings.push_back("tilted density is not decaying at the grid end; E[exp(max(U))] may be infinite");
    }
  }
  return result;
}

MomentIdentityReport check_moment_identity(const TabulatedCDF& f_t, const TabulatedCDF& f_u, double tol) {
  MomentIdentityReport report;
  report.e_minus_maxT = expected_exp_minus_max(f_t);
  const ExpMaxMoment plus = expected_exp_max(f_u);
  report.e_plus_maxU = plus.value;
  report.diverging = plus.diverging;
  report.product = report.e_minus_maxT * report.e_plus_maxU;
  report.pass = !report.diverging && std::abs(report.product - 1.0) <= tol;
  return report;
}

std::vector<double> isotonic_fit(const std::vector<double>& values) {
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      Block last = blocks.back();
      blocks.pop_back();
      blocks.back().sum += last.sum;
      blocks.back().count += last.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean());
  return out;
}

}  // namespace profex
