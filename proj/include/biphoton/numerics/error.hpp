#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace biphoton {

enum class ErrorKind {
  invalid_grid,
  range,
  convergence_failure,
  under_resolved,
  degenerate_configuration,
  no_compression_solution,
  grid_mismatch,
  invalid_spec,
  config,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_grid: return "invalid-grid";
    case ErrorKind::range: return "range";
    case ErrorKind::convergence_failure: return "convergence-failure";
    case ErrorKind::under_resolved: return "under-resolved";
    case ErrorKind::degenerate_configuration: return "degenerate-configuration";
    case ErrorKind::no_compression_solution: return "no-compression-solution";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace biphoton
