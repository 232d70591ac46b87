#include "profex/tail_constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "profex/errors.hpp"

namespace profex {

SpectralVector::SpectralVector(Vector values) : values_(std::move(values)) {
  if (values_.size() < 2) fail(ErrorKind::InvalidInput, "spectral vector needs at least 2 components");
  if (!values_.allFinite()) fail(ErrorKind::InvalidInput, "spectral vector has non-finite entries");
  if (values_.maxCoeff() != 0.0) {
    std::ostringstream os;
    os << "spectral vector maximum is " << values_.maxCoeff() << ", not 0";
    fail(ErrorKind::InvalidInput, os.str());
  }
}

SpectralVector spectral_from_profile(const ProfileVector& t) {
  Vector s = t.values().array() - t.max();
  return SpectralVector(std::move(s));
}

ProfileVector profile_from_spectral(const SpectralVector& s) { return center(s.values()); }

const char* to_string(LawRole role) noexcept {
  switch (role) {
    case LawRole::Profile: return "profile";
    case LawRole::Generator: return "generator";
    case LawRole::Spectral: return "spectral";
  }
  return "?";
}

const char* to_string(TailKind kind) noexcept {
  switch (kind) {
    case TailKind::X: return "X";
    case TailKind::Z: return "Z";
    case TailKind::Zstar: return "Zstar";
  }
  return "?";
}

void check_role_invariant(LawRole role, const Vector& v) {
  if (!v.allFinite()) fail(ErrorKind::InvalidInput, std::string(to_string(role)) + " draw has non-finite entries");
  if (role == LawRole::Spectral) {
    if (v.maxCoeff() != 0.0) fail(ErrorKind::InvalidInput, "spectral draw must have maximum exactly 0");
    return;
  }
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if (std::abs(v.sum()) > static_cast<double>(v.size()) * kCenterTolerance * scale) {
    fail(ErrorKind::InvalidInput, std::string(to_string(role)) + " draw does not sum to zero");
  }
}

VectorLaw::VectorLaw(LawRole role, std::size_t dim, DrawFn draw)
    : role_(role), dim_(dim), draw_(std::move(draw)) {
  if (dim_ < 2) fail(ErrorKind::InvalidInput, "law dimension must be at least 2");
  if (!draw_) fail(ErrorKind::InvalidInput, "law needs a draw function");
}

VectorLaw VectorLaw::gaussian(GaussianProfileLaw law, LawRole role) {
  if (role == LawRole::Spectral) fail(ErrorKind::InvalidInput, "a Gaussian law on the hyperplane cannot be spectral");
  const std::size_t d = law.dim();
  return VectorLaw(role, d, [law = std::move(law)](Rng& rng, Eigen::Ref<Vector> out) { law.draw(rng, out); });
}

VectorLaw VectorLaw::empirical(Matrix rows, LawRole role) {
  if (rows.rows() == 0) fail(ErrorKind::InvalidInput, "empirical law needs at least one row");
  for (Eigen::Index i = 0; i < rows.rows(); ++i) check_role_invariant(role, rows.row(i).transpose());
  const auto d = static_cast<std::size_t>(rows.cols());
  return VectorLaw(role, d, [rows = std::move(rows)](Rng& rng, Eigen::Ref<Vector> out) {
    out = rows.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(rows.rows())))).transpose();
  });
}

VectorLaw VectorLaw::degenerate(Vector point, LawRole role) {
  check_role_invariant(role, point);
  const auto d = static_cast<std::size_t>(point.size());
  return VectorLaw(role, d, [point = std::move(point)](Rng&, Eigen::Ref<Vector> out) { out = point; });
}

VectorLaw VectorLaw::spectral() const {
  switch (role_) {
    case LawRole::Spectral: return *this;
    case LawRole::Generator:
      return VectorLaw(LawRole::Spectral, dim_, [inner = draw_](Rng& rng, Eigen::Ref<Vector> out) {
        inner(rng, out);
        out.array() -= out.maxCoeff();
      });
    case LawRole::Profile: break;
  }
  fail(ErrorKind::InvalidInput, "a profile law has no direct spectral map; tilt it with sample_t_from_u first");
}

Matrix VectorLaw::sample(std::size_t n, std::uint64_t seed) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Matrix out(static_cast<Eigen::Index>(n), d);
  Vector row(d);
  for (std::size_t start = 0, chunk = 0; start < n; start += kChunkSize, ++chunk) {
    Rng rng(split_seed(seed, chunk));
    for (std::size_t i = start; i < std::min(n, start + kChunkSize); ++i) {
      draw(rng, row);
      check_role_invariant(role_, row);
      out.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
  }
  return out;
}

namespace {

void require_draws(std::size_t n, const char* op) {
  if (n == 0) fail(ErrorKind::InvalidInput, std::string(op) + " needs n >= 1");
}

void require_role(const VectorLaw& law, LawRole role, const char* op) {
  if (law.role() != role) {
    fail(ErrorKind::InvalidInput, std::string(op) + " needs a " + to_string(role) + " law, got " +
                                      to_string(law.role()));
  }
}

// E*1 + V for n draws of V; the draw of V precedes the draw of E.
TailSampleSet shift_along_diagonal(const VectorLaw& law, TailKind kind, std::size_t n, std::uint64_t seed) {
  const auto d = static_cast<Eigen::Index>(law.dim());
  const auto rows = static_cast<Eigen::Index>(n);
  TailSampleSet set;
  set.kind = kind;
  set.values.resize(rows, d);
  set.generators.resize(rows, d);
  set.radii.resize(rows);
  Vector v(d);
  for (std::size_t start = 0, chunk = 0; start < n; start += kChunkSize, ++chunk) {
    Rng rng(split_seed(seed, chunk));
    for (std::size_t i = start; i < std::min(n, start + kChunkSize); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      law.draw(rng, v);
      check_role_invariant(law.role(), v);
      const double e = rng.exponential();
      set.generators.row(r) = v.transpose();
      set.radii(r) = e;
      set.values.row(r) = (v.array() + e).matrix().transpose();
    }
  }
  return set;
}

}  // namespace

TailSampleSet sample_z(const VectorLaw& law, std::size_t n, std::uint64_t seed) {
  require_draws(n, "sample_z");
  return shift_along_diagonal(law.spectral(), TailKind::Z, n, seed);
}

TailSampleSet sample_x_from_u(const VectorLaw& u_law, std::size_t n, std::uint64_t seed) {
  require_draws(n, "sample_x_from_u");
  require_role(u_law, LawRole::Profile, "sample_x_from_u");
  TailSampleSet set = shift_along_diagonal(u_law, TailKind::X, n, seed);
  if (auto check = check_exponential_moment(set.generators); !check.stable) set.warnings.push_back(check.message);
  return set;
}

TailSampleSet sample_zstar_from_u(const VectorLaw& u_law, std::size_t n, std::uint64_t seed) {
  require_draws(n, "sample_zstar_from_u");
  require_role(u_law, LawRole::Profile, "sample_zstar_from_u");
  TailSampleSet set = shift_along_diagonal(u_law, TailKind::Zstar, n, seed);
  if (auto check = check_exponential_moment(set.generators); !check.stable) set.warnings.push_back(check.message);
  return set;
}

MomentStabilization check_exponential_moment(const Matrix& profiles) {
  MomentStabilization out;
  const Eigen::Index n = profiles.rows();
  if (n == 0) return out;
  const Vector maxima = profiles.rowwise().maxCoeff();
  const double top = maxima.maxCoeff();
  // Work relative to the largest term to stay finite.
  const Vector terms = (maxima.array() - top).exp().matrix();
  const double total = terms.sum();
  const Eigen::Index half = n / 2;
  out.mean = std::exp(top) * total / static_cast<double>(n);
  out.half_mean = half > 0 ? std::exp(top) * terms.head(half).sum() / static_cast<double>(half) : out.mean;
  out.largest_share = 1.0 / total;
  if (n < 100) return out;
  const double drift = std::abs(out.half_mean - out.mean) / out.mean;
  if (drift > 0.05 || out.largest_share > 0.01) {
    std::ostringstream os;
    os << "running mean of exp(max(U)) has not stabilized (half-sample drift " << drift
       << ", largest single share " << out.largest_share << "); E[exp(max(U))] may be infinite";
    out.stable = false;
    out.message = os.str();
  }
  return out;
}

RejectionResult sample_u_from_t(const VectorLaw& t_law, std::size_t n, std::uint64_t seed,
                                const RejectionOptions& options) {
  require_draws(n, "sample_u_from_t");
  require_role(t_law, LawRole::Generator, "sample_u_from_t");
  const auto d = static_cast<Eigen::Index>(t_law.dim());
  RejectionResult result;
  result.profiles.resize(static_cast<Eigen::Index>(n), d);
  const auto early_check = static_cast<std::uint64_t>(std::ceil(100.0 / options.min_acceptance));

  auto too_slow = [&](std::uint64_t accepted) {
    std::ostringstream os;
    os << "rejection sampler accepted " << accepted << " of " << result.attempts
       << " draws (floor " << options.min_acceptance << ", budget " << options.max_attempts
       << "); use the tilting sampler instead";
    fail(ErrorKind::Inefficiency, os.str());
  };

  Vector t(d);
  std::uint64_t accepted = 0;
  for (std::size_t chunk = 0; accepted < n; ++chunk) {
    Rng rng(split_seed(seed, chunk));
    const std::uint64_t chunk_target = std::min<std::uint64_t>(n, accepted + kChunkSize);
    while (accepted < chunk_target) {
      if (result.attempts >= options.max_attempts) too_slow(accepted);
      t_law.draw(rng, t);
      check_role_invariant(LawRole::Generator, t);
      const double e = rng.exponential();
      ++result.attempts;
      if (t.maxCoeff() <= e) result.profiles.row(static_cast<Eigen::Index>(accepted++)) = t.transpose();
      if (result.attempts == early_check &&
          static_cast<double>(accepted) < options.min_acceptance * static_cast<double>(result.attempts)) {
        too_slow(accepted);
      }
    }
  }
  const double p = static_cast<double>(accepted) / static_cast<double>(result.attempts);
  result.acceptance_rate = p;
  result.acceptance_se = std::sqrt(p * (1.0 - p) / static_cast<double>(result.attempts));
  return result;
}

TiltingResult sample_t_from_u(const Matrix& u_samples, std::size_t m, std::uint64_t seed) {
  const Eigen::Index n = u_samples.rows();
  if (n == 0) fail(ErrorKind::InvalidInput, "sample_t_from_u needs at least one profile draw");
  for (Eigen::Index i = 0; i < n; ++i) check_role_invariant(LawRole::Profile, u_samples.row(i).transpose());

  const Vector maxima = u_samples.rowwise().maxCoeff();
  const double top = maxima.maxCoeff();
  const Vector scaled = (maxima.array() - top).exp().matrix();  // w_i / max(w)
  const double scaled_sum = scaled.sum();
  const double nd = static_cast<double>(n);

  TiltingResult result;
  result.weight_mean = std::exp(top) * scaled_sum / nd;
  if (n > 1) {
    const double centered_ss = (scaled.array() - scaled_sum / nd).square().sum();
    result.weight_mean_se = std::exp(top) * std::sqrt(centered_ss / (nd - 1.0) / nd);
  }
  result.ess = scaled_sum * scaled_sum / scaled.squaredNorm();
  result.weight_ratio = scaled_sum;

  std::vector<double> cumulative(static_cast<std::size_t>(n));
  double running = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) cumulative[static_cast<std::size_t>(i)] = (running += scaled(i));

  result.profiles.resize(static_cast<Eigen::Index>(m), u_samples.cols());
  for (std::size_t start = 0, chunk = 0; start < m; start += kChunkSize, ++chunk) {
    Rng rng(split_seed(seed, chunk));
    for (std::size_t j = start; j < std::min(m, start + kChunkSize); ++j) {
      const double target = rng.uniform() * running;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
      if (it == cumulative.end()) --it;
      result.profiles.row(static_cast<Eigen::Index>(j)) = u_samples.row(it - cumulative.begin());
    }
  }
  return result;
}

GevExponent gev_exponent(const VectorLaw& law, const Vector& x, std::size_t n, std::uint64_t seed) {
  require_draws(n, "gev_exponent");
  if (x.size() != static_cast<Eigen::Index>(law.dim())) fail(ErrorKind::InvalidInput, "gev_exponent: x has the wrong length");
  if (!x.allFinite()) fail(ErrorKind::InvalidInput, "gev_exponent: x must be finite");

  const bool tilted = law.role() == LawRole::Profile;
  const Matrix draws = tilted ? law.sample(n, seed) : law.spectral().sample(n, seed);
  const double nd = static_cast<double>(n);

  // a_i = exp(max(v - x)); for profile draws also b_i = exp(max(v)).
  Vector a(draws.rows()), b(draws.rows());
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    a(i) = std::exp((draws.row(i).transpose() - x).maxCoeff());
    b(i) = std::exp(draws.row(i).maxCoeff());
  }

  GevExponent out;
  const double a_mean = a.mean();
  if (!tilted) {
    out.v = a_mean;
    if (n > 1) out.se = std::sqrt((a.array() - a_mean).square().sum() / (nd - 1.0) / nd);
  } else {
    const double b_mean = b.mean();
    out.v = a.sum() / b.sum();
    if (n > 1) {
      // Delta method for a ratio of means.
      const Vector resid = a - out.v * b;
      out.se = std::sqrt(resid.squaredNorm() / (nd - 1.0) / nd) / b_mean;
    }
  }
  out.g = std::exp(-out.v);
  return out;
}

Vector gumbel_locations(const VectorLaw& law, std::size_t n, std::uint64_t seed) {
  require_draws(n, "gumbel_locations");
  const Matrix draws = law.sample(n, seed);
  return draws.array().exp().colwise().mean().log().matrix().transpose();
}

}  // namespace profex
