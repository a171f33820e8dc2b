#pragma once

#include <stdexcept>
#include <string>

namespace sdglens {

// Coarse error classes. The numeric values double as CLI exit codes for the
// first three, so keep them stable.
enum class ErrorCode {
  kValidation = 1,
  kBackend = 2,
  kParse = 3,
  kIo = 4,
  kEmptyDocument = 5,
  kInternal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCode::kValidation, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCode::kIo, message) {}
};

}  // namespace sdglens
