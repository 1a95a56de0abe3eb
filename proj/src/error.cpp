#include "ppmx/error.hpp"

#include <utility>

namespace ppmx {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kData:
      return "data";
    case ErrorCode::kTraining:
      return "training";
    case ErrorCode::kExplanation:
      return "explanation";
  }
  return "unknown";
}

Error::Error(ErrorCode code, std::string reason, const std::string& message)
    : std::runtime_error(reason + ": " + message), code_(code), reason_(std::move(reason)) {}

void throw_config(std::string reason, const std::string& message) {
  throw Error(ErrorCode::kConfig, std::move(reason), message);
}
void throw_data(std::string reason, const std::string& message) {
  throw Error(ErrorCode::kData, std::move(reason), message);
}
void throw_training(std::string reason, const std::string& message) {
  throw Error(ErrorCode::kTraining, std::move(reason), message);
}
void throw_explanation(std::string reason, const std::string& message) {
  throw Error(ErrorCode::kExplanation, std::move(reason), message);
}

}  // namespace ppmx
