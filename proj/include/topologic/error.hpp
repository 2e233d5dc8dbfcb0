#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topologic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed formula text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// An input model, frame, algebra or argument violates its invariants.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A search, rewrite or table check ran past its configured limit.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A computed result failed its post-hoc verification.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace topologic
