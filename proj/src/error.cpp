#include "factorlab/error.hpp"

#include <sstream>

namespace factorlab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ExpansionTooLarge: return "ExpansionTooLarge";
    case Errc::InvalidExponent: return "InvalidExponent";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::InvalidArgs: return "InvalidArgs";
    case Errc::SupportOverlap: return "SupportOverlap";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::ExactFormUnavailable: return "ExactFormUnavailable";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string format_number(double value) {
  std::ostringstream ss;
  ss << value;
  return ss.str();
}

}  // namespace factorlab
