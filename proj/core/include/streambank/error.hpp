#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace streambank {

/// Broad failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  config,     ///< invalid parameters or flag combinations
  data,       ///< non-finite values, misaligned inputs, undefined metrics
  format,     ///< malformed or unsupported file contents
  shape,      ///< dimension mismatch between operands
  io,         ///< filesystem failures
  numerical,  ///< decomposition did not converge
  state,      ///< operation invoked on an object in the wrong state
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::data: return "data";
    case ErrorKind::format: return "format";
    case ErrorKind::shape: return "shape";
    case ErrorKind::io: return "io";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::state: return "state";
  }
  return "unknown";
}

}  // namespace streambank
