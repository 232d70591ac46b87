#pragma once

// Transforms between the laws of max(T) and max(U) on tabulated grids.
//
// With F_T, F_U the distribution functions of max(T) and max(U) on [0, inf):
//   F_U(s) = [ int_0^s F_T(t) e^{-t} dt + e^{-s} F_T(s) ] / E[e^{-max(T)}]
//   F_T(s) = [ e^{s} F_U(s) - int_0^s F_U(t) e^{t} dt ] / E[e^{max(U)}]
// and for densities f_U = f_T e^{-s} / E[e^{-max(T)}], f_T = f_U e^{s} / E[e^{max(U)}].
// Both moments are linked by E[e^{max(U)}] * E[e^{-max(T)}] = 1.
//
// Integrals use the composite trapezoid rule on the table's grid. Outputs are
// clamped to [0, 1] and made monotone by pool-adjacent-violators; the size of
// that correction is reported and must stay below kMaxCleanup.

#include <functional>
#include <string>
#include <vector>

namespace profex {

inline constexpr double kDefaultGridStep = 1e-3;
inline constexpr double kDefaultTailMass = 1e-8;
inline constexpr double kMonotoneSlack = 1e-12;
inline constexpr double kMaxCleanup = 1e-6;
inline constexpr double kNormalizerFloor = 1e-12;
inline constexpr double kDensityNormTolerance = 1e-3;
inline constexpr double kMomentIdentityTolerance = 1e-3;
/// Fraction of the grid, at its upper end, watched for non-decaying integrands.
inline constexpr double kTailWindowFraction = 0.1;
/// Share of an integral allowed inside the tail window before it is flagged.
inline constexpr double kTailWindowShare = 0.01;

class TabulatedCDF {
 public:
  /// Grid must start at 0 and increase strictly; values must lie in [0, 1],
  /// be nondecreasing and leave at most `tail_mass_tol` mass beyond the grid.
  TabulatedCDF(std::vector<double> grid, std::vector<double> values, double tail_mass_tol = kDefaultTailMass);

  /// Uniform grid 0, step, ..., s_max.
  static TabulatedCDF on_grid(const std::function<double(double)>& cdf, double step, double s_max,
                              double tail_mass_tol = kDefaultTailMass);
  /// Uniform grid extended until 1 - cdf(s_max) <= tail_mass_tol.
  static TabulatedCDF tabulate(const std::function<double(double)>& cdf, double step = kDefaultGridStep,
                               double tail_mass_tol = kDefaultTailMass, double s_max_limit = 700.0);
  /// Empirical distribution function of nonnegative samples on a uniform grid
  /// reaching past the largest sample.
  static TabulatedCDF empirical(std::vector<double> samples, double step = kDefaultGridStep);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double tail_mass_tol() const noexcept { return tail_mass_tol_; }
  std::size_t size() const noexcept { return grid_.size(); }
  /// Linear interpolation; 0 below the grid and the last value beyond it.
  double operator()(double s) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  double tail_mass_tol_;
};

class TabulatedDensity {
 public:
  /// Values must be finite and nonnegative and integrate (trapezoid) to
  /// within `tol_norm` of 1.
  TabulatedDensity(std::vector<double> grid, std::vector<double> values, double tol_norm = kDensityNormTolerance);

  static TabulatedDensity on_grid(const std::function<double(double)>& density, double step, double s_max,
                                  double tol_norm = kDensityNormTolerance);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double tol_norm() const noexcept { return tol_norm_; }
  double integral() const;
  double operator()(double s) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  double tol_norm_;
};

struct LinkResult {
  TabulatedCDF cdf;
  double normalizer = 0.0;   ///< E[e^{-max(T)}] or E[e^{max(U)}]
  double cleanup = 0.0;      ///< largest isotonic/clamp adjustment
  bool tail_flag = false;    ///< integrand not decaying at the grid end
  std::vector<std::string> warnings;
};

/// F_T -> F_U. Throws ErrorKind::DegenerateLaw when E[e^{-max(T)}] is below
/// kNormalizerFloor and ErrorKind::GridResolution when cleanup exceeds kMaxCleanup.
LinkResult maxu_cdf_from_maxt(const TabulatedCDF& f_t);
/// F_U -> F_T, with E[e^{max(U)}] = 1 + int (1 - F_U) e^t dt.
LinkResult maxt_cdf_from_maxu(const TabulatedCDF& f_u);

enum class TiltDirection { TtoU, UtoT };

struct DensityLinkResult {
  TabulatedDensity density;
  double normalizer = 0.0;
  bool tail_flag = false;
  std::vector<std::string> warnings;
};

DensityLinkResult density_transform(const TabulatedDensity& f_in, TiltDirection direction);

/// E[e^{-max(T)}] = int_0^inf F_T(t) e^{-t} dt from a table.
double expected_exp_minus_max(const TabulatedCDF& f_t);

struct ExpMaxMoment {
  double value = 0.0;          ///< E[e^{max(U)}], truncated at the grid end
  double tail_share = 0.0;     ///< share of the integral inside the tail window
  bool diverging = false;
};

ExpMaxMoment expected_exp_max(const TabulatedCDF& f_u);

struct MomentIdentityReport {
  double e_minus_maxT = 0.0;
  double e_plus_maxU = 0.0;
  double product = 0.0;
  bool diverging = false;
  bool pass = false;
};

MomentIdentityReport check_moment_identity(const TabulatedCDF& f_t, const TabulatedCDF& f_u,
                                           double tol = kMomentIdentityTolerance);

/// Least-squares nondecreasing fit (pool-adjacent-violators, unit weights).
std::vector<double> isotonic_fit(const std::vector<double>& values);

}  // namespace profex
