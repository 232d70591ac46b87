#pragma once

// Stochastic representations linking the tail objects of an exponential-scale
// vector X:
//   Z  = E*1 + S        (S spectral: max(S) = 0)
//   Z* = E'*1 + U       (U profile: U on the hyperplane)
//   T  = S - mean(S)*1, S = T - max(T)*1
//   U  = T | {max(T) <= E}, and T is U tilted by exp(max(U)).
// A law with E[exp(max(U))] finite generates X = E*1 + U whose profile is U.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "profex/husler_reiss.hpp"
#include "profex/hyperplane.hpp"
#include "profex/rng.hpp"

namespace profex {

/// A finite vector whose largest component is exactly zero.
class SpectralVector {
 public:
  explicit SpectralVector(Vector values);

  const Vector& values() const noexcept { return values_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.size()); }

 private:
  Vector values_;
};

SpectralVector spectral_from_profile(const ProfileVector& t);
ProfileVector profile_from_spectral(const SpectralVector& s);

/// Which tail object a vector law describes.
enum class LawRole {
  Profile,    ///< U
  Generator,  ///< T
  Spectral,   ///< S
};

const char* to_string(LawRole role) noexcept;

/// Handle to an i.i.d. vector law. Draws are pure functions of the supplied
/// Rng, so a handle can be shared freely.
class VectorLaw {
 public:
  using DrawFn = std::function<void(Rng&, Eigen::Ref<Vector>)>;

  VectorLaw(LawRole role, std::size_t dim, DrawFn draw);

  static VectorLaw gaussian(GaussianProfileLaw law, LawRole role = LawRole::Profile);
  /// Uniform resampling of the rows of `rows`, each checked against `role`.
  static VectorLaw empirical(Matrix rows, LawRole role);
  static VectorLaw degenerate(Vector point, LawRole role);

  /// The spectral law S = T - max(T)*1 of a generator law; identity on a
  /// spectral law. Profile laws need tilting first (sample_t_from_u).
  VectorLaw spectral() const;

  LawRole role() const noexcept { return role_; }
  std::size_t dim() const noexcept { return dim_; }

  void draw(Rng& rng, Eigen::Ref<Vector> out) const { draw_(rng, out); }

  /// n draws as rows, using the chunked seed split; every draw is checked for
  /// the role's structural invariant.
  Matrix sample(std::size_t n, std::uint64_t seed) const;

 private:
  LawRole role_;
  std::size_t dim_;
  DrawFn draw_;
};

/// Throws ErrorKind::InvalidInput unless `v` satisfies the invariant of `role`.
void check_role_invariant(LawRole role, const Vector& v);

enum class TailKind { X, Z, Zstar };

const char* to_string(TailKind kind) noexcept;

struct TailSampleSet {
  TailKind kind = TailKind::X;
  Matrix values;       ///< one draw per row
  Vector radii;        ///< the exponential draw added along 1
  Matrix generators;   ///< the underlying U (X, Z*) or S (Z) draws
  std::vector<std::string> warnings;
};

/// Z = E*1 + S. A generator law is mapped to its spectral law first.
TailSampleSet sample_z(const VectorLaw& law, std::size_t n, std::uint64_t seed);
/// X = E*1 + U from a profile law.
TailSampleSet sample_x_from_u(const VectorLaw& u_law, std::size_t n, std::uint64_t seed);
/// Z* = E'*1 + U from a profile law.
TailSampleSet sample_zstar_from_u(const VectorLaw& u_law, std::size_t n, std::uint64_t seed);

/// Running-mean diagnostic for E[exp(max(U))] < infinity. Finiteness cannot
/// be decided from draws, so this only ever warns.
struct MomentStabilization {
  double mean = 0.0;
  double half_mean = 0.0;        ///< over the first half of the draws
  double largest_share = 0.0;    ///< largest single term over the total
  bool stable = true;
  std::string message;
};

MomentStabilization check_exponential_moment(const Matrix& profiles);

struct RejectionOptions {
  std::uint64_t max_attempts = 1'000'000'000;
  double min_acceptance = 1e-6;
};

struct RejectionResult {
  Matrix profiles;
  std::uint64_t attempts = 0;
  double acceptance_rate = 0.0;  ///< estimates E[exp(-max(T))]
  double acceptance_se = 0.0;
};

/// U = T | {max(T) <= E} by rejection. Throws ErrorKind::Inefficiency when
/// the budget runs out or the acceptance rate is below the floor.
RejectionResult sample_u_from_t(const VectorLaw& t_law, std::size_t n, std::uint64_t seed,
                                const RejectionOptions& options = {});

struct TiltingResult {
  Matrix profiles;
  double weight_mean = 0.0;     ///< estimates E[exp(max(U))]
  double weight_mean_se = 0.0;
  double ess = 0.0;             ///< Kish effective sample size
  double weight_ratio = 0.0;    ///< sum(w) / max(w)
};

/// Sampling-importance-resampling of T from profile draws, weights
/// exp(max(u_i)). Each row of `u_samples` must be a profile vector.
TiltingResult sample_t_from_u(const Matrix& u_samples, std::size_t m, std::uint64_t seed);

struct GevExponent {
  double v = 0.0;   ///< E[exp(max(S - x))]
  double se = 0.0;
  double g = 0.0;   ///< exp(-v)
};

/// Monte Carlo exponent of the max-stable distribution G(x) = exp(-V(x)).
/// Profile laws use the tilted ratio E[exp(max(U - x))] / E[exp(max(U))].
GevExponent gev_exponent(const VectorLaw& law, const Vector& x, std::size_t n, std::uint64_t seed);

/// Gumbel locations log E[exp(V_k)] of the margins of E*1 + V.
Vector gumbel_locations(const VectorLaw& law, std::size_t n, std::uint64_t seed);

}  // namespace profex
