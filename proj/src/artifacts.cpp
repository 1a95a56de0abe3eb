#include "ppmx/artifacts.hpp"

#include <algorithm>
#include <array>
#include <memory>

#include <openssl/evp.h>

#include "ppmx/serialization.hpp"
#include "ppmx/text.hpp"

namespace ppmx {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path.string())); }

std::vector<ManifestEntry> list_files(const std::filesystem::path& dir) {
  std::vector<ManifestEntry> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = std::filesystem::relative(entry.path(), dir).generic_string();
    if (rel == kManifestFile) continue;
    out.push_back({rel, sha256_file(entry.path()), entry.file_size()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return out;
}

namespace {

ErrorCode parse_code(const std::string& s) {
  if (s == "config") return ErrorCode::kConfig;
  if (s == "training") return ErrorCode::kTraining;
  if (s == "explanation") return ErrorCode::kExplanation;
  return ErrorCode::kData;
}

}  // namespace

void write_manifest(const std::filesystem::path& dir, Manifest manifest) {
  manifest.files = list_files(dir);
  Json files = Json::array();
  for (const auto& f : manifest.files) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  Json j = {{"status", manifest.ok() ? "ok" : "failed"},
            {"exit_code", manifest.exit_code()},
            {"config_hash", manifest.config_hash},
            {"unsafe_pairings", manifest.unsafe_pairings},
            {"files", files}};
  if (manifest.failure) {
    j["failure"] = {{"stage", manifest.failure->stage},
                    {"error", to_string(manifest.failure->code)},
                    {"reason", manifest.failure->reason},
                    {"message", manifest.failure->message}};
  }
  write_json(dir / kManifestFile, j);
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const Json j = read_json(dir / kManifestFile);
  Manifest m;
  m.config_hash = j.at("config_hash").get<std::string>();
  m.unsafe_pairings = j.value("unsafe_pairings", false);
  if (auto it = j.find("failure"); it != j.end()) {
    m.failure = FailureInfo{it->at("stage").get<std::string>(), parse_code(it->at("error").get<std::string>()),
                            it->at("reason").get<std::string>(), it->at("message").get<std::string>()};
  }
  for (const auto& f : j.at("files"))
    m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                       f.at("bytes").get<std::uintmax_t>()});
  return m;
}

}  // namespace ppmx
