#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cli/output.hpp"
#include "profex/csv.hpp"
#include "profex/dpot.hpp"
#include "profex/max_link.hpp"
#include "profex/stats.hpp"
#include "profex/tail_constructions.hpp"
#include "profex/tail_pca.hpp"

namespace profex::cli {

namespace {

std::vector<std::string> column_names(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= d; ++k) names.push_back("x" + std::to_string(k));
  return names;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a_hex(buffer.str());
}

json describe_input(const std::filesystem::path& path) {
  return json{{"path", path.generic_string()}, {"fnv1a", file_digest(path)}};
}

// Manifest pairing the outputs of one run with its inputs, seed and config.
void write_manifest(OutputSet& out, const RunConfig& config, const json& inputs) {
  json manifest = {
      {"tool", "profex"},
      {"version", kVersion},
      {"command", config.command},
      {"config", config.params},
      {"config_hash", config.hash()},
      {"inputs", inputs},
      {"outputs", out.names()},
  };
  if (config.params.contains("seed")) manifest["seed"] = config.params["seed"];
  out.write_json(config.command + ".manifest.json", manifest);
}

// ---- simulate --------------------------------------------------------------

// E*1 + v for each row of `rows`, with E from its own seeded stream.
Matrix add_radii(const Matrix& rows, std::uint64_t seed) {
  Matrix out = rows;
  const auto n = static_cast<std::size_t>(rows.rows());
  for (std::size_t start = 0, chunk = 0; start < n; start += kChunkSize, ++chunk) {
    Rng rng(split_seed(seed, chunk));
    for (std::size_t i = start; i < std::min(n, start + kChunkSize); ++i) out.row(static_cast<Eigen::Index>(i)).array() += rng.exponential();
  }
  return out;
}

VectorLaw as_generator(const VectorLaw& law) {
  if (law.role() == LawRole::Generator) return law;
  if (law.role() == LawRole::Spectral) {
    return VectorLaw(LawRole::Generator, law.dim(), [law](Rng& rng, Eigen::Ref<Vector> out) {
      law.draw(rng, out);
      out.array() -= out.mean();
    });
  }
  config_error("a profile law is not a generator law");
}

struct Draws {
  Matrix rows;
  json diagnostics = json::object();
};

Draws profile_draws(const VectorLaw& law, std::size_t n, std::uint64_t seed, const RejectionOptions& options) {
  Draws out;
  if (law.role() == LawRole::Profile) {
    out.rows = law.sample(n, seed);
    return out;
  }
  RejectionResult rej = sample_u_from_t(as_generator(law), n, seed, options);
  out.rows = std::move(rej.profiles);
  out.diagnostics["acceptance_rate"] = rej.acceptance_rate;
  out.diagnostics["acceptance_se"] = rej.acceptance_se;
  out.diagnostics["attempts"] = rej.attempts;
  return out;
}

Draws generator_draws(const VectorLaw& law, std::size_t n, std::uint64_t seed, std::size_t proposals) {
  Draws out;
  if (law.role() != LawRole::Profile) {
    out.rows = as_generator(law).sample(n, seed);
    return out;
  }
  const Matrix u = law.sample(proposals, split_seed(seed, 1));
  TiltingResult tilt = sample_t_from_u(u, n, split_seed(seed, 2));
  out.rows = std::move(tilt.profiles);
  out.diagnostics["proposals"] = proposals;
  out.diagnostics["weight_mean"] = tilt.weight_mean;
  out.diagnostics["weight_mean_se"] = tilt.weight_mean_se;
  out.diagnostics["effective_sample_size"] = tilt.ess;
  return out;
}

Matrix spectral_rows(Matrix t) {
  for (Eigen::Index i = 0; i < t.rows(); ++i) t.row(i).array() -= t.row(i).maxCoeff();
  return t;
}

}  // namespace

CommandResult run_simulate(const RunConfig& config) {
  const auto& p = config.params;
  if (!p.contains("law")) config_error("simulate needs a 'law'");
  const auto n = config.get_or<std::size_t>("n", 0);
  if (n == 0) config_error("simulate needs n >= 1");
  const std::string kind = config.get_or<std::string>("kind", "X");
  const std::uint64_t seed = config.seed();
  const auto proposals = config.get_or<std::size_t>("proposals", 10 * n);
  const std::string name = config.get_or<std::string>("output", "samples.csv");
  RejectionOptions rejection;
  rejection.max_attempts = config.get_or<std::uint64_t>("max_attempts", rejection.max_attempts);
  rejection.min_acceptance = config.get_or<double>("min_acceptance", rejection.min_acceptance);

  json inputs = json::array();
  if (p["law"].contains("file")) inputs.push_back(describe_input(config.resolve(p["law"]["file"].get<std::string>())));
  const VectorLaw law = law_from_json(p["law"], config);

  CommandResult result;
  json diagnostics = json::object();
  Matrix rows;
  if (kind == "U") {
    Draws draws = profile_draws(law, n, seed, rejection);
    rows = std::move(draws.rows);
    diagnostics = std::move(draws.diagnostics);
  } else if (kind == "T" || kind == "S") {
    Draws draws = generator_draws(law, n, seed, proposals);
    rows = kind == "S" ? spectral_rows(std::move(draws.rows)) : std::move(draws.rows);
    diagnostics = std::move(draws.diagnostics);
  } else if (kind == "X" || kind == "Zstar") {
    if (law.role() == LawRole::Profile) {
      TailSampleSet set = kind == "X" ? sample_x_from_u(law, n, seed) : sample_zstar_from_u(law, n, seed);
      rows = std::move(set.values);
      diagnostics["warnings"] = set.warnings;
    } else {
      Draws draws = profile_draws(law, n, seed, rejection);
      rows = add_radii(draws.rows, split_seed(seed, 3));
      diagnostics = std::move(draws.diagnostics);
    }
  } else if (kind == "Z") {
    if (law.role() == LawRole::Profile) {
      Draws draws = generator_draws(law, n, seed, proposals);
      rows = add_radii(spectral_rows(std::move(draws.rows)), split_seed(seed, 3));
      diagnostics = std::move(draws.diagnostics);
    } else {
      rows = sample_z(law, n, seed).values;
    }
  } else {
    config_error("unknown kind '" + kind + "' (expected X, Zstar, Z, U, T or S)");
  }

  OutputSet out(config.out_dir);
  out.write_csv(name, column_names(law.dim()), rows);
  result.report = {{"kind", kind}, {"n", n}, {"d", law.dim()}, {"role", to_string(law.role())},
                   {"diagnostics", diagnostics}};
  out.write_json("simulate_report.json", result.report);
  write_manifest(out, config, inputs);
  out.commit();
  result.outputs = out.names();
  return result;
}

CommandResult run_fit(const RunConfig& config) {
  const auto input = config.input_file("input");
  const double q = config.get_or<double>("quantile", kDefaultQuantile);
  const std::string margins = config.get_or<std::string>("margins", "empirical");
  const bool extended = config.get_or<bool>("extended", false);
  if (margins != "empirical" && margins != "exponential") config_error("margins must be 'empirical' or 'exponential'");

  const CsvTable table = read_csv(input, HeaderMode::Required);
  DataMatrix data(table.values, table.header);
  if (margins == "empirical") data = standardize_margins(data);

  const ExceedanceSet exc = extract_exceedances(data.values(), q);
  const HRFit fit = fit_hr(exc, extended);

  CommandResult result;
  result.report = {
      {"q", exc.q},
      {"r", exc.r},
      {"k", fit.k},
      {"margins", margins},
      {"extended", extended},
      {"gamma_hat", matrix_to_json(fit.gamma_hat.matrix())},
      {"sigma_hat", matrix_to_json(fit.sigma_hat.matrix())},
      {"mu_hat", vector_to_json(fit.mu_hat.values())},
      {"mean_link_discrepancy", fit.mean_link_discrepancy ? json(*fit.mean_link_discrepancy) : json(nullptr)},
      {"rank", fit.rank},
      {"clamped_eigenvalue", fit.clamped_eigenvalue},
      {"warnings", fit.warnings},
  };

  OutputSet out(config.out_dir);
  out.write_csv("exceedances.csv", data.names(), exc.exceedances);
  out.write_csv("profiles.csv", data.names(), exc.profiles);

  if (config.params.contains("stability_quantiles")) {
    const auto levels = config.params["stability_quantiles"].get<std::vector<double>>();
    const auto table_rows = threshold_stability(data.values(), levels, extended);
    const auto d = static_cast<Eigen::Index>(data.cols());
    std::vector<std::string> header = {"q", "r", "k"};
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i + 1; j < d; ++j) header.push_back("gamma_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    Matrix stab(static_cast<Eigen::Index>(table_rows.size()), static_cast<Eigen::Index>(header.size()));
    json errors = json::array();
    for (std::size_t row = 0; row < table_rows.size(); ++row) {
      const auto& s = table_rows[row];
      const auto r = static_cast<Eigen::Index>(row);
      stab(r, 0) = s.q;
      stab(r, 1) = s.error.empty() ? s.r : std::nan("");
      stab(r, 2) = s.error.empty() ? static_cast<double>(s.k) : std::nan("");
      Eigen::Index c = 3;
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) stab(r, c++) = s.gamma_hat ? (*s.gamma_hat)(i, j) : std::nan("");
      if (!s.error.empty()) errors.push_back({{"q", s.q}, {"error", s.error}});
    }
    out.write_csv("stability.csv", header, stab);
    result.report["stability_errors"] = errors;
  }

  out.write_json("fit_report.json", result.report);
  write_manifest(out, config, json::array({describe_input(input)}));
  out.commit();
  result.outputs = out.names();
  return result;
}

CommandResult run_pca(const RunConfig& config) {
  const auto& p = config.params;
  json inputs = json::array();
  ProfileEigensystem eig = [&] {
    if (p.contains("samples")) {
      const auto path = config.input_file("samples");
      inputs.push_back(describe_input(path));
      return profile_pca_samples(read_csv(path, HeaderMode::Required).values);
    }
    if (p.contains("law")) {
      const json& spec = p["law"];
      const std::string type = spec.value("type", std::string());
      if (type == "husler_reiss") return profile_pca(GaussianProfileLaw::husler_reiss(Variogram(matrix_from_json(spec["gamma"], "gamma"))));
      if (type == "gaussian_profile") {
        HyperplaneCovariance sigma(matrix_from_json(spec["sigma"], "sigma"));
        ProfileVector mu = spec.contains("mu") ? ProfileVector(vector_from_json(spec["mu"], "mu")) : mu_from_sigma(sigma);
        return profile_pca(GaussianProfileLaw(std::move(mu), std::move(sigma), spec.value("extended", false)));
      }
      config_error("pca law must be husler_reiss or gaussian_profile");
    }
    if (p.contains("sigma")) return profile_pca(HyperplaneCovariance(matrix_from_json(p["sigma"], "sigma")));
    if (p.contains("gamma")) return profile_pca(GaussianProfileLaw::husler_reiss(Variogram(matrix_from_json(p["gamma"], "gamma"))));
    config_error("pca needs one of 'samples', 'law', 'sigma' or 'gamma'");
  }();

  const auto d = eig.dim();
  const auto rank = config.get_or<std::size_t>("rank", d - 1);
  const TruncatedProfile trunc = truncate_to_rank(eig, rank);

  CommandResult result;
  result.report = {
      {"source", to_string(eig.source)},
      {"eigenvalues", vector_to_json(eig.eigenvalues)},
      {"eigenvectors", matrix_to_json(eig.eigenvectors.transpose())},
      {"degenerate_groups", eig.degenerate_groups},
      {"mean", vector_to_json(eig.mean)},
      {"trace", eig.eigenvalues.sum()},
      {"truncation",
       {{"rank", rank},
        {"sigma", matrix_to_json(trunc.sigma.matrix())},
        {"gamma", matrix_to_json(sigma_to_gamma(trunc.sigma).matrix())},
        {"mean_projected", vector_to_json(trunc.mean_projected)},
        {"mu_linked", vector_to_json(trunc.mu_linked.values())},
        {"discarded_mean_norm", trunc.discarded_mean_norm},
        {"reconstruction_error", reconstruction_error(eig, rank)}}},
  };

  OutputSet out(config.out_dir);
  if (eig.source == EigenSource::Sample) out.write_csv("projected.csv", column_names(d), trunc.projected);
  out.write_json("pca_report.json", result.report);
  write_manifest(out, config, inputs);
  out.commit();
  result.outputs = out.names();
  return result;
}

CommandResult run_link(const RunConfig& config) {
  const auto& p = config.params;
  const std::string direction = config.get_or<std::string>("direction", "T_to_U");
  if (direction != "T_to_U" && direction != "U_to_T") config_error("direction must be 'T_to_U' or 'U_to_T'");
  const double step = config.get_or<double>("grid_step", kDefaultGridStep);
  const double tail_tol = config.get_or<double>("tail_mass_tol", kDefaultTailMass);
  const double identity_tol = config.get_or<double>("moment_identity_tol", kMomentIdentityTolerance);

  json inputs = json::array();
  const TabulatedCDF input = [&] {
    if (p.contains("input")) {
      const auto path = config.input_file("input");
      inputs.push_back(describe_input(path));
      const CsvTable table = read_csv(path, HeaderMode::Required);
      if (table.values.cols() != 2) fail(ErrorKind::Io, "distribution table needs two columns (s, value)");
      std::vector<double> grid(table.values.col(0).data(), table.values.col(0).data() + table.values.rows());
      std::vector<double> values(table.values.col(1).data(), table.values.col(1).data() + table.values.rows());
      return TabulatedCDF(std::move(grid), std::move(values), tail_tol);
    }
    if (p.contains("exponential_rate")) {
      const double rate = p["exponential_rate"].get<double>();
      if (!(rate > 0.0)) config_error("exponential_rate must be positive");
      const double s_max = config.get_or<double>("s_max", 20.0);
      return TabulatedCDF::on_grid([rate](double s) { return 1.0 - std::exp(-rate * s); }, step, s_max,
                                   std::max(tail_tol, std::exp(-rate * s_max)));
    }
    config_error("link needs 'input' (CSV of s,value) or 'exponential_rate'");
  }();

  const bool t_to_u = direction == "T_to_U";
  const LinkResult link = t_to_u ? maxu_cdf_from_maxt(input) : maxt_cdf_from_maxu(input);
  const MomentIdentityReport identity =
      t_to_u ? check_moment_identity(input, link.cdf, identity_tol) : check_moment_identity(link.cdf, input, identity_tol);

  Matrix table(static_cast<Eigen::Index>(link.cdf.size()), 2);
  for (std::size_t j = 0; j < link.cdf.size(); ++j) {
    table(static_cast<Eigen::Index>(j), 0) = link.cdf.grid()[j];
    table(static_cast<Eigen::Index>(j), 1) = link.cdf.values()[j];
  }

  CommandResult result;
  result.report = {
      {"direction", direction},
      {"normalizer", link.normalizer},
      {"normalizer_name", t_to_u ? "E[exp(-max(T))]" : "E[exp(max(U))]"},
      {"cleanup", link.cleanup},
      {"tail_flag", link.tail_flag},
      {"warnings", link.warnings},
      {"moment_identity",
       {{"e_minus_maxT", identity.e_minus_maxT},
        {"e_plus_maxU", identity.e_plus_maxU},
        {"product", identity.product},
        {"diverging", identity.diverging},
        {"pass", identity.pass}}},
  };

  OutputSet out(config.out_dir);
  out.write_csv("link_cdf.csv", {"s", "value"}, table);
  out.write_json("link_cdf.json", json{{"grid_step", link.cdf.grid()[1] - link.cdf.grid()[0]},
                                       {"tail_mass_tol", link.cdf.tail_mass_tol()}});
  out.write_json("link_report.json", result.report);
  write_manifest(out, config, inputs);
  out.commit();
  result.outputs = out.names();
  return result;
}

CommandResult run_command(const RunConfig& config) {
  if (config.command == "simulate") return run_simulate(config);
  if (config.command == "fit") return run_fit(config);
  if (config.command == "pca") return run_pca(config);
  if (config.command == "link") return run_link(config);
  config_error("unknown command '" + config.command + "'");
}

}  // namespace profex::cli
