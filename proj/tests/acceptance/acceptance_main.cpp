// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "profex/dpot.hpp"
#include "profex/husler_reiss.hpp"
#include "profex/max_link.hpp"
#include "profex/stats.hpp"
#include "profex/tail_constructions.hpp"
#include "profex/tail_pca.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace profex;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

auto exp_cdf(double rate) {
  return [rate](double s) { return s <= 0 ? 0.0 : 1.0 - std::exp(-rate * s); };
}

double sup_error(const TabulatedCDF& f, const std::function<double(double)>& g) {
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) worst = std::max(worst, std::abs(f.values()[j] - g(f.grid()[j])));
  return worst;
}

VectorLaw exp_max_law(double rate, LawRole role) {
  return VectorLaw(role, 2, [rate](Rng& rng, Eigen::Ref<Vector> out) { out = testing::exp_max_generator(rng, rate); });
}

void hr_round_trip(Outcome& out) {
  Rng rng(20240601);
  double worst = 0.0;
  std::map<Eigen::Index, int> dims;
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(9));
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(d) + 2));
    const Matrix gamma = testing::random_variogram(rng, d, k);
    worst = std::max(worst, max_abs(sigma_to_gamma(gamma_to_sigma(Variogram(gamma))).matrix() - gamma));
    ++dims[d];
  }
  out.detail << "100 variograms, d in 2.." << dims.rbegin()->first << ", max entry error " << worst;
  out.require(dims.size() == 9, "every d in 2..10 exercised");
  out.require(worst <= 1e-12, "round trip to 1e-12");
}

void worked_case(Outcome& out) {
  const HyperplaneCovariance sigma = gamma_to_sigma(Variogram(testing::worked_gamma()));
  const Vector mu = mu_from_sigma(sigma).values();
  Vector mu_expected(3);
  mu_expected << 5.0 / 18, 1.0 / 9, -7.0 / 18;
  const double sigma_err = max_abs(sigma.matrix() - testing::worked_sigma_from_generator());
  const double sigma_err_exact = max_abs(sigma.matrix() - testing::worked_sigma());
  const double mu_err = (mu - mu_expected).cwiseAbs().maxCoeff();
  out.detail << "sigma error " << std::max(sigma_err, sigma_err_exact) << ", mu error " << mu_err;
  out.require(sigma_err <= 1e-12 && sigma_err_exact <= 1e-12, "sigma to 1e-12");
  out.require(mu_err <= 1e-12, "mu to 1e-12");
}

void max_law_transform(Outcome& out) {
  const TabulatedCDF f_t = TabulatedCDF::on_grid(exp_cdf(1), 1e-3, 20.0, 1e-8);
  const LinkResult forward = maxu_cdf_from_maxt(f_t);
  const double err_forward = sup_error(forward.cdf, exp_cdf(2));
  const LinkResult back = maxt_cdf_from_maxu(forward.cdf);
  const double err_back = sup_error(back.cdf, exp_cdf(1));
  const MomentIdentityReport identity = check_moment_identity(f_t, forward.cdf);
  out.detail << "forward sup " << err_forward << ", round trip sup " << err_back << ", moment product "
             << identity.product;
  out.require(err_forward < 1e-4, "forward within 1e-4");
  out.require(err_back < 1e-4, "round trip within 1e-4");
  out.require(std::abs(identity.product - 1.0) <= 1e-3, "moment product within 1e-3");
}

void rejection_sampler(Outcome& out) {
  const RejectionResult res = sample_u_from_t(exp_max_law(1, LawRole::Generator), 100000, 4401);
  const double ks = ks_distance(row_maxima(res.profiles), exp_cdf(2));
  const double z = (res.acceptance_rate - 0.5) / res.acceptance_se;
  out.detail << "acceptance " << res.acceptance_rate << " (" << z << " SE from 0.5), KS vs Exp(2) " << ks;
  out.require(std::abs(z) <= 3, "acceptance within 3 SE of 1/2");
  out.require(ks < 0.01, "KS < 0.01");
}

void tilting_sampler(Outcome& out) {
  const Matrix u = exp_max_law(2, LawRole::Profile).sample(1000000, 5501);
  const TiltingResult res = sample_t_from_u(u, 100000, 5502);
  const double ks = ks_distance(row_maxima(res.profiles), exp_cdf(1));
  out.detail << "KS vs Exp(1) " << ks << ", effective sample size " << res.ess;
  out.require(ks < 0.02, "KS < 0.02");
}

std::vector<HyperplaneCovariance> g_fitted;

void dpot_exactness(Outcome& out) {
  const VectorLaw law = VectorLaw::gaussian(GaussianProfileLaw::husler_reiss(Variogram(testing::two_point_gamma(1))));
  const std::size_t k = 100000;
  std::vector<double> estimates;
  for (double q : {0.5, 0.9, 0.99}) {
    const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(k) / (1.0 - q)));
    Matrix x = sample_x_from_u(law, n, 6600 + static_cast<std::uint64_t>(q * 100)).values;
    const ExceedanceSet exc = extract_exceedances(x, q);
    x.resize(0, 0);
    const HRFit fit = fit_hr(exc);
    estimates.push_back(fit.gamma_hat(0, 1));
    g_fitted.push_back(fit.sigma_hat);
    out.detail << "q=" << q << ": k=" << fit.k << " gamma12=" << fit.gamma_hat(0, 1) << "; ";
    out.require(std::abs(fit.gamma_hat(0, 1) - 1.0) < 0.05, "|gamma12 - 1| < 0.05 at q = " + std::to_string(q));
    out.require(fit.k >= k, "k >= 1e5 at q = " + std::to_string(q));
  }
  const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
  out.detail << "spread " << *hi - *lo;
  out.require(*hi - *lo < 0.05, "max pairwise difference < 0.05");
}

void pca_structure(Outcome& out) {
  std::vector<HyperplaneCovariance> inputs = g_fitted;
  inputs.emplace_back(testing::worked_sigma());
  inputs.emplace_back(0.5 * 2.0 * testing::projector(3));
  Rng rng(7700);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.index(9));
    const Eigen::Index kk = 1 + static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(d) + 2));
    inputs.push_back(gamma_to_sigma(Variogram(testing::random_variogram(rng, d, kk))));
  }
  {
    const VectorLaw law = VectorLaw::gaussian(GaussianProfileLaw::husler_reiss(Variogram(testing::worked_gamma())));
    const ExceedanceSet exc = extract_exceedances(sample_x_from_u(law, 20000, 7701).values, 0.5);
    inputs.push_back(fit_hr(exc).sigma_hat);
  }
  double worst_last = 0, worst_cos = 1, worst_trace = 0;
  for (const auto& sigma : inputs) {
    const ProfileEigensystem eig = profile_pca(sigma);
    const auto d = static_cast<Eigen::Index>(eig.dim());
    worst_last = std::max(worst_last, eig.eigenvalues(d - 1));
    worst_cos = std::min(worst_cos, std::abs(eig.eigenvectors.col(d - 1).sum()) / std::sqrt(static_cast<double>(d)));
    worst_trace = std::max(worst_trace, std::abs(eig.eigenvalues.sum() - sigma.matrix().trace()));
  }
  out.detail << inputs.size() << " covariances: max last eigenvalue " << worst_last << ", min |cos| " << worst_cos
             << ", trace error " << worst_trace;
  out.require(worst_last < 1e-10, "last eigenvalue < 1e-10");
  out.require(worst_cos > 1 - 1e-8, "last eigenvector along 1");
  out.require(worst_trace <= 1e-10, "trace identity to 1e-10");

  const HyperplaneCovariance scaled(0.5 * 2.0 * testing::projector(3));
  const double model = reconstruction_error(profile_pca(scaled), 1);
  const std::size_t n = 100000;
  const Matrix u = sample_gaussian_profile(GaussianProfileLaw::husler_reiss(scaled), n, 7702);
  const ProfileEigensystem eig = profile_pca_samples(u);
  const TruncatedProfile trunc = truncate_to_rank(eig, 1);
  std::vector<double> sq(n);
  for (Eigen::Index i = 0; i < u.rows(); ++i) sq[static_cast<std::size_t>(i)] = (u.row(i) - trunc.projected.row(i)).squaredNorm();
  const double sample = reconstruction_error(eig, 1);
  const double se = testing::standard_error(sq);
  out.detail << "; rank-1 error model " << model << ", sample " << sample << " (SE " << se << ")";
  out.require(std::abs(model - 1.0) <= 1e-12, "model rank-1 error = 1");
  out.require(std::abs(sample - 1.0) <= 3 * se, "sample rank-1 error within 3 SE");
}

void gev_exponent_checks(Outcome& out) {
  const VectorLaw complete = VectorLaw::degenerate(Vector::Zero(3), LawRole::Spectral);
  double worst = 0;
  Rng rng(8800);
  for (int rep = 0; rep < 5; ++rep) {
    Vector x(3);
    for (Eigen::Index k = 0; k < 3; ++k) x(k) = rng.normal();
    const GevExponent v = gev_exponent(complete, x, 100000, 8801 + static_cast<std::uint64_t>(rep));
    const double gap = std::abs(v.v - std::exp(-x.minCoeff()));
    worst = std::max(worst, gap);
    out.require(gap <= std::max(3 * v.se, 1e-12 * v.v), "complete dependence V(x) = exp(-min x)");
  }
  const std::vector<VectorLaw> laws = {
      VectorLaw::gaussian(GaussianProfileLaw::husler_reiss(Variogram(testing::worked_gamma()))),
      VectorLaw::gaussian(GaussianProfileLaw::husler_reiss(Variogram(testing::equi_gamma(3, 4.0)))),
      exp_max_law(1.0, LawRole::Generator),
      exp_max_law(3.0, LawRole::Profile),
      VectorLaw::degenerate(Vector::Zero(2), LawRole::Spectral),
  };
  double worst_g0 = 0;
  std::uint64_t seed = 8900;
  for (const auto& law : laws) {
    const GevExponent g0 = gev_exponent(law, Vector::Zero(static_cast<Eigen::Index>(law.dim())), 100000, ++seed);
    worst_g0 = std::max(worst_g0, std::abs(g0.g - std::exp(-1.0)));
  }
  out.detail << "complete-dependence gap " << worst << ", max |G(0) - 1/e| over " << laws.size() << " laws " << worst_g0;
  out.require(worst_g0 <= 1e-12, "G(0) = 1/e");
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(entry.path(), dir).generic_string()] = s.str();
  }
  return files;
}

void end_to_end_determinism(Outcome& out, const fs::path& work) {
  const fs::path dir = work / "pipeline";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const cli::json sim = {{"law", {{"type", "husler_reiss"}, {"gamma", {{0, 1}, {1, 0}}}}},
                         {"kind", "X"}, {"n", 20000}, {"seed", 7}, {"out_dir", "run"}};
  const cli::json fit = {{"input", "run/samples.csv"}, {"quantile", 0.9}, {"out_dir", "run"},
                         {"stability_quantiles", {0.8, 0.9, 0.95}}};
  auto pipeline = [&] {
    cli::run_command(cli::RunConfig::from_json("simulate", sim, dir));
    cli::run_command(cli::RunConfig::from_json("fit", fit, dir));
    return snapshot(dir / "run");
  };
  const auto first = pipeline();
  const auto second = pipeline();
  out.detail << first.size() << " files compared";
  out.require(first.size() >= 7, "pipeline wrote its outputs");
  out.require(first == second, "byte-identical rerun");
  for (const auto& [name, bytes] : first) {
    auto it = second.find(name);
    if (it == second.end() || it->second != bytes) out.detail << " differs: " << name;
  }
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "profex_acceptance";
  fs::create_directories(work);

  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"hr-round-trip", hr_round_trip},
      {"worked-d3-case", worked_case},
      {"max-law-transform", max_law_transform},
      {"rejection-sampler", rejection_sampler},
      {"tilting-inverse", tilting_sampler},
      {"diagonal-pot-exactness", dpot_exactness},
      {"pca-structure", pca_structure},
      {"gev-exponent", gev_exponent_checks},
      {"end-to-end-determinism", [&](Outcome& o) { end_to_end_determinism(o, work); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].run(outcome);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].name << ": "
              << outcome.detail.str() << " (" << std::round(secs * 10) / 10 << " s)" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
