#include "profex/errors.hpp"

namespace profex {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::SampleSize: return "sample-size error";
    case ErrorKind::DegenerateMargin: return "degenerate margin";
    case ErrorKind::DegenerateLaw: return "degenerate law";
    case ErrorKind::Inefficiency: return "sampler inefficiency";
    case ErrorKind::GridResolution: return "grid resolution";
    case ErrorKind::Numeric: return "numeric error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, std::string(to_string(kind)) + ": " + message);
}

}  // namespace profex
