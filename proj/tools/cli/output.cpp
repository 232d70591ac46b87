#include "cli/output.hpp"

#include <fstream>
#include <sstream>

#include "profex/csv.hpp"

namespace profex::cli {

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorKind::InvalidInput, "cannot create output directory '" + dir_.string() + "': " + ec.message());
}

OutputSet::~OutputSet() {
  if (committed_) return;
  std::error_code ec;
  for (const auto& name : names_) std::filesystem::remove(dir_ / name, ec);
}

void OutputSet::write_text(const std::string& name, const std::string& content) {
  const auto target = dir_ / name;
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      fail(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
    }
  }
  std::filesystem::rename(tmp, target);
  names_.push_back(name);
}

void OutputSet::write_csv(const std::string& name, const std::vector<std::string>& header, const Matrix& values) {
  std::ostringstream os;
  profex::write_csv(os, header, values);
  write_text(name, os.str());
}

void OutputSet::write_json(const std::string& name, const json& value) { write_text(name, value.dump(2) + "\n"); }

}  // namespace profex::cli
