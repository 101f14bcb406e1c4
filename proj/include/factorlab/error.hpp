#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace factorlab {

enum class Errc {
  DegreeMismatch,
  DimensionMismatch,
  IndexOutOfRange,
  ExpansionTooLarge,
  InvalidExponent,
  DimensionTooSmall,
  InvalidArgs,
  SupportOverlap,
  NotNormalized,
  ExactFormUnavailable,
  ParseError,
};

std::string_view to_string(Errc code) noexcept;

/// Shortest decimal text for a double, for error messages.
std::string format_number(double value);

/// Domain error raised by every factorlab operation. The code is stable and
/// is what the CLI reports in its structured error output.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace factorlab
