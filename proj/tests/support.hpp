#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ppmx/error.hpp"
#include "ppmx/event_log.hpp"
#include "ppmx/feature_matrix.hpp"
#include "ppmx/prefixing.hpp"

namespace ppmx::testing {

inline constexpr TimestampMs kT0 = 1577836800000;  // 2020-01-01T00:00:00Z
inline constexpr TimestampMs kMinuteMs = 60'000;

// Trace with one event per activity, `step` apart.
Trace make_trace(const std::string& id, const std::vector<std::string>& activities, std::optional<bool> label = {},
                 TimestampMs start = kT0, TimestampMs step = kMinuteMs);

// Log without extra attributes.
EventLog activity_log(const std::vector<std::vector<std::string>>& traces, const std::vector<bool>& labels);

// Random schema (0-3 static and 0-4 dynamic attributes of mixed types,
// categorical levels drawn from small alphabets, ~20% nulls) and a labeled
// log conforming to it.
EventLog random_log(std::uint64_t seed, std::size_t n_traces = 24, std::size_t max_len = 12);

// Prefixes of the given traces at their full length.
std::vector<PrefixTrace> full_prefixes(const EventLog& log);

// Static-numeric descriptor named after its source.
FeatureDescriptor numeric_column(const std::string& name);

// Matrix with static-numeric descriptors named after `names`.
FeatureMatrix make_matrix(const std::vector<std::string>& names, const std::vector<double>& row_major,
                          const std::vector<int>& labels);

// n x d standard normal matrix, columns x0..x{d-1}, labels all 0.
FeatureMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed);

// n x d matrix of U(0,1) columns x0..x{d-1}; label ~ Bernoulli(sigmoid(slope
// (x0 - 0.5))). Moderate signal keeps the likelihood well curved.
FeatureMatrix logistic_matrix(std::size_t n, std::size_t d, std::uint64_t seed, double slope = 3.0);

FeatureMatrix with_labels(const FeatureMatrix& m, const std::vector<int>& labels);

// Self-removing scratch directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Reads every file under `dir` into (relative path, bytes) pairs, sorted.
std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir);

}  // namespace ppmx::testing

#define EXPECT_PPMX_ERROR(stmt, expected_code, expected_reason)                             \
  do {                                                                                      \
    try {                                                                                   \
      stmt;                                                                                 \
      ADD_FAILURE() << "expected " #expected_reason " error";                               \
    } catch (const ::ppmx::Error& e) {                                                      \
      EXPECT_EQ(e.code(), ::ppmx::ErrorCode::expected_code) << e.what();                    \
      EXPECT_EQ(e.reason(), expected_reason) << e.what();                                   \
    }                                                                                       \
  } while (false)
