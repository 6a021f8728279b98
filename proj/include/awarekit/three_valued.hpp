#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>

namespace awarekit {

/// Truth value of a formula at a state of a three-valued semantics.
enum class ThreeValued : std::uint8_t { False, True, Undefined };

constexpr ThreeValued from_bool(bool b) { return b ? ThreeValued::True : ThreeValued::False; }

constexpr ThreeValued negate(ThreeValued v) {
  switch (v) {
    case ThreeValued::True:
      return ThreeValued::False;
    case ThreeValued::False:
      return ThreeValued::True;
    case ThreeValued::Undefined:
      break;
  }
  return ThreeValued::Undefined;
}

constexpr std::string_view to_string(ThreeValued v) {
  switch (v) {
    case ThreeValued::True:
      return "True";
    case ThreeValued::False:
      return "False";
    case ThreeValued::Undefined:
      break;
  }
  return "Undefined";
}

inline std::ostream& operator<<(std::ostream& os, ThreeValued v) { return os << to_string(v); }

}  // namespace awarekit
