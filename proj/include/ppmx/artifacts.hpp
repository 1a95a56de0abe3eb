#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppmx/error.hpp"

namespace ppmx {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;  // relative, '/'-separated
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct FailureInfo {
  std::string stage;
  ErrorCode code = ErrorCode::kData;
  std::string reason;
  std::string message;
};

struct Manifest {
  std::string config_hash;
  bool unsafe_pairings = false;
  std::optional<FailureInfo> failure;  // absent on success
  std::vector<ManifestEntry> files;    // sorted by path

  bool ok() const { return !failure; }
  int exit_code() const { return failure ? static_cast<int>(failure->code) : 0; }
};

inline constexpr const char* kManifestFile = "manifest.json";

// Every regular file under `dir` except the manifest itself.
std::vector<ManifestEntry> list_files(const std::filesystem::path& dir);

void write_manifest(const std::filesystem::path& dir, Manifest manifest);
Manifest read_manifest(const std::filesystem::path& dir);

}  // namespace ppmx
