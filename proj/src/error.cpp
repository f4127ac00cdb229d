#include "burgulence/error.hpp"

namespace burgulence {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::numerical_input: return "numerical-input";
    case ErrorKind::range: return "range";
    case ErrorKind::instability: return "instability";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::excluded_case: return "excluded-case";
    case ErrorKind::undefined: return "undefined";
    case ErrorKind::internal: return "internal";
    case ErrorKind::io: return "io";
    case ErrorKind::span: return "span";
  }
  return "unknown";
}

}  // namespace burgulence
