#pragma once

#include <stdexcept>
#include <string>

namespace profex {

/// Broad failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  InvalidInput,     ///< malformed arguments: wrong shapes, non-finite values
  Parameter,        ///< a model parameter violates its invariants
  SampleSize,       ///< too few observations or exceedances
  DegenerateMargin, ///< a data column carries no rank information
  DegenerateLaw,    ///< a law has (numerically) no mass where it needs some
  Inefficiency,     ///< a sampler would exceed its draw budget
  GridResolution,   ///< a tabulated transform is not resolved by the grid
  Numeric,          ///< solver failure
  Io,               ///< file or parse failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace profex
