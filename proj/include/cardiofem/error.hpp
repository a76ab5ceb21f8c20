#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cardiofem {

enum class ErrorKind {
  invalid_input,
  geometry,
  star_shape,
  degenerate,
  configuration,
  constraint_conflict,
  singular_system,
  incompressible,
  io,
  internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. The kind tells callers (and the CLI
/// exit-code mapping) what went wrong; the message carries the location.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Same kind, message prefixed with `context: `.
  Error with_context(std::string_view context) const {
    return Error(kind_, std::string(context) + ": " + what());
  }

 private:
  ErrorKind kind_;
};

}  // namespace cardiofem
