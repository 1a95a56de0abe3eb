#pragma once

#include <stdexcept>
#include <string>

namespace ppmx {

// Pipeline stage an error belongs to. The numeric value is the CLI exit code.
enum class ErrorCode : int {
  kConfig = 2,
  kData = 3,
  kTraining = 4,
  kExplanation = 5,
};

const char* to_string(ErrorCode code);

// Carries a stage code plus a short machine-readable reason tag such as
// "InconsistentStatic" or "MixedLengthBucket".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string reason, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& reason() const noexcept { return reason_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
  std::string reason_;
};

[[noreturn]] void throw_config(std::string reason, const std::string& message);
[[noreturn]] void throw_data(std::string reason, const std::string& message);
[[noreturn]] void throw_training(std::string reason, const std::string& message);
[[noreturn]] void throw_explanation(std::string reason, const std::string& message);

}  // namespace ppmx
