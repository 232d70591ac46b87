#include "profex/csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "profex/errors.hpp"

namespace profex {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

}  // namespace

CsvTable parse_csv(std::string_view text, HeaderMode mode) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) fail(ErrorKind::Io, "CSV input is empty");

  CsvTable table;
  std::size_t first = 0;
  const auto head = split_fields(lines.front());
  bool header = mode == HeaderMode::Required;
  if (mode == HeaderMode::Optional) {
    for (auto f : head) header = header || !parse_number(f);
  }
  if (header) {
    for (auto f : head) table.header.emplace_back(trim(f));
    first = 1;
  }
  const std::size_t cols = head.size();
  table.values.resize(static_cast<Eigen::Index>(lines.size() - first), static_cast<Eigen::Index>(cols));
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != cols) {
      fail(ErrorKind::Io, "CSV row " + std::to_string(i + 1) + " has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const auto v = parse_number(fields[j]);
      if (!v) fail(ErrorKind::Io, "CSV row " + std::to_string(i + 1) + ": '" + std::string(fields[j]) + "' is not a number");
      table.values(static_cast<Eigen::Index>(i - first), static_cast<Eigen::Index>(j)) = *v;
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path, HeaderMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), mode);
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) fail(ErrorKind::Numeric, "cannot format number");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  if (!header.empty()) out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_number(values(i, j));
    out << '\n';
  }
}

}  // namespace profex
