#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace profex::cli {

/// Files written by one command. Each file goes through a temporary name and
/// a rename; unless commit() is reached, the destructor removes everything
/// written so far.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  void write_text(const std::string& name, const std::string& content);
  void write_csv(const std::string& name, const std::vector<std::string>& header, const Matrix& values);
  void write_json(const std::string& name, const json& value);
  void commit() { committed_ = true; }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

}  // namespace profex::cli
