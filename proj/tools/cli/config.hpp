#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "profex/errors.hpp"
#include "profex/husler_reiss.hpp"
#include "profex/tail_constructions.hpp"

namespace profex::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 2 configuration, 3 data, 4 numeric.
int exit_code(ErrorKind kind) noexcept;

/// A command's configuration: the JSON config file with flag overrides
/// applied. Relative paths inside it resolve against `base_dir`.
struct RunConfig {
  std::string command;
  json params = json::object();
  std::filesystem::path base_dir = ".";
  std::filesystem::path out_dir = ".";

  static RunConfig load(const std::string& command, const std::filesystem::path& config_path);
  static RunConfig from_json(const std::string& command, json params, std::filesystem::path base_dir = ".");

  std::uint64_t seed() const;  ///< throws a configuration error when absent
  std::filesystem::path resolve(const std::string& path) const;
  /// Fails unless the referenced file exists.
  std::filesystem::path input_file(const std::string& key) const;

  template <typename T>
  T get_or(const std::string& key, T fallback) const {
    if (!params.contains(key) || params[key].is_null()) return fallback;
    return params[key].get<T>();
  }

  /// FNV-1a of the canonical JSON text, as 16 hex digits.
  std::string hash() const;
};

[[noreturn]] void config_error(const std::string& message);

Matrix matrix_from_json(const json& j, const std::string& what);
Vector vector_from_json(const json& j, const std::string& what);
json matrix_to_json(const Matrix& m);
json vector_to_json(const Vector& v);

LawRole parse_role(const std::string& name);
/// Builds a vector law from a law spec:
///   {"type": "husler_reiss", "gamma": [[...]]}
///   {"type": "gaussian_profile", "mu": [...], "sigma": [[...]], "extended": bool}
///   {"type": "degenerate", "point": [...], "role": "profile"}
///   {"type": "empirical", "file": "rows.csv", "role": "generator"}
VectorLaw law_from_json(const json& spec, const RunConfig& config);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace profex::cli
