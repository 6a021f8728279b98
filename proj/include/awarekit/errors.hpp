#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace awarekit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position()` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A model, world, agent or atom that does not satisfy the contract of the
/// operation it was handed to.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive scan refused because the input exceeds a configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace awarekit
