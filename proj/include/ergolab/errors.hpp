#pragma once

#include <stdexcept>
#include <string>

namespace ergolab {

// Numeric codes match the C API status values in ergolab.h.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Parse = 2,
  Domain = 3,
  Precision = 4,
  Unsupported = 5,
  Guard = 6,
  Io = 7,
  Property = 8,
  Internal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorCode::Parse, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const std::string& what, long long index)
      : Error(ErrorCode::Precision, what + " (n=" + std::to_string(index) + ")"), index_(index) {}
  long long index() const noexcept { return index_; }

 private:
  long long index_;
};

class Unsupported : public Error {
 public:
  explicit Unsupported(const std::string& what) : Error(ErrorCode::Unsupported, what) {}
};

class GuardExceeded : public Error {
 public:
  explicit GuardExceeded(const std::string& what) : Error(ErrorCode::Guard, what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace ergolab
