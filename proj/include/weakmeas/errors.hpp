#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wm {

enum class ErrorKind {
  invalid_dimension,
  invalid_parameter,
  shape,
  contract_violation,
  orthogonal_postselection,
  truncation,
  estimation_undefined,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code logic) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::shape: return "shape";
    case ErrorKind::contract_violation: return "contract-violation";
    case ErrorKind::orthogonal_postselection: return "orthogonal-postselection";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::estimation_undefined: return "estimation-undefined";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace wm
