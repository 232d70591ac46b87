#include "cli/config.hpp"

#include <fstream>
#include <sstream>

#include "profex/csv.hpp"

namespace profex::cli {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::Parameter:
      return 2;
    case ErrorKind::SampleSize:
    case ErrorKind::DegenerateMargin:
    case ErrorKind::Io:
      return 3;
    case ErrorKind::DegenerateLaw:
    case ErrorKind::Inefficiency:
    case ErrorKind::GridResolution:
    case ErrorKind::Numeric:
      return 4;
  }
  return 4;
}

void config_error(const std::string& message) { fail(ErrorKind::InvalidInput, "config: " + message); }

RunConfig RunConfig::load(const std::string& command, const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) config_error("cannot open '" + config_path.string() + "'");
  json params;
  try {
    in >> params;
  } catch (const json::exception& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  return from_json(command, std::move(params), config_path.parent_path().empty() ? "." : config_path.parent_path());
}

RunConfig RunConfig::from_json(const std::string& command, json params, std::filesystem::path base_dir) {
  if (!params.is_object()) config_error("top level must be a JSON object");
  if (params.contains("command") && params["command"].get<std::string>() != command) {
    config_error("config is for '" + params["command"].get<std::string>() + "', not '" + command + "'");
  }
  RunConfig config;
  config.command = command;
  config.base_dir = std::move(base_dir);
  if (params.contains("out_dir")) config.out_dir = config.resolve(params["out_dir"].get<std::string>());
  config.params = std::move(params);
  return config;
}

std::uint64_t RunConfig::seed() const {
  if (!params.contains("seed")) config_error("'" + command + "' is stochastic and needs a seed");
  return params["seed"].get<std::uint64_t>();
}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

std::filesystem::path RunConfig::input_file(const std::string& key) const {
  if (!params.contains(key)) config_error("missing '" + key + "'");
  const auto path = resolve(params[key].get<std::string>());
  if (!std::filesystem::is_regular_file(path)) config_error("input file '" + path.string() + "' does not exist");
  return path;
}

std::string RunConfig::hash() const { return fnv1a_hex(params.dump()); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) config_error("'" + what + "' must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) config_error("'" + what + "' rows differ in length");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) config_error("'" + what + "' must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

LawRole parse_role(const std::string& name) {
  if (name == "profile" || name == "U") return LawRole::Profile;
  if (name == "generator" || name == "T") return LawRole::Generator;
  if (name == "spectral" || name == "S") return LawRole::Spectral;
  config_error("unknown law role '" + name + "'");
}

VectorLaw law_from_json(const json& spec, const RunConfig& config) {
  if (!spec.is_object() || !spec.contains("type")) config_error("law needs a 'type'");
  const auto type = spec["type"].get<std::string>();
  const LawRole role = parse_role(spec.value("role", std::string("profile")));
  if (type == "husler_reiss") {
    if (!spec.contains("gamma")) config_error("husler_reiss law needs 'gamma'");
    return VectorLaw::gaussian(GaussianProfileLaw::husler_reiss(Variogram(matrix_from_json(spec["gamma"], "gamma"))), role);
  }
  if (type == "gaussian_profile") {
    if (!spec.contains("sigma")) config_error("gaussian_profile law needs 'sigma'");
    HyperplaneCovariance sigma(matrix_from_json(spec["sigma"], "sigma"));
    const bool extended = spec.value("extended", false);
    ProfileVector mu = spec.contains("mu") ? ProfileVector(vector_from_json(spec["mu"], "mu")) : mu_from_sigma(sigma);
    return VectorLaw::gaussian(GaussianProfileLaw(std::move(mu), std::move(sigma), extended), role);
  }
  if (type == "degenerate") {
    if (!spec.contains("point")) config_error("degenerate law needs 'point'");
    return VectorLaw::degenerate(vector_from_json(spec["point"], "point"), role);
  }
  if (type == "empirical") {
    if (!spec.contains("file")) config_error("empirical law needs 'file'");
    const auto path = config.resolve(spec["file"].get<std::string>());
    if (!std::filesystem::is_regular_file(path)) config_error("input file '" + path.string() + "' does not exist");
    return VectorLaw::empirical(read_csv(path, HeaderMode::Required).values, role);
  }
  config_error("unknown law type '" + type + "'");
}

}  // namespace profex::cli
