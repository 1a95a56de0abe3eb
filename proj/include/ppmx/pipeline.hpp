#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ppmx/artifacts.hpp"
#include "ppmx/config.hpp"
#include "ppmx/event_log.hpp"
#include "ppmx/exec.hpp"

namespace ppmx {

struct LogSplit {
  EventLog train;
  EventLog test;
};

// Temporal: cases ordered by (start, case id), the first fraction trains.
// Random: seeded shuffle of case ids.
LogSplit split_log(const EventLog& log, SplitKind kind, double train_fraction, std::uint64_t seed);

struct RunResult {
  std::filesystem::path dir;
  Manifest manifest;
  int exit_code() const { return manifest.exit_code(); }
};

// Runs every stage and writes the artifact directory. Stage errors are
// caught, recorded in a partial manifest and reflected in the exit code.
// An existing `out_dir` must be empty or hold a previous run.
RunResult run_experiment(const RunConfig& config, const std::filesystem::path& out_dir, Exec exec = Exec::kParallel);

struct GridResult {
  std::filesystem::path dir;
  std::vector<std::pair<std::string, RunResult>> cells;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
};

// One run per legal cell under `out_dir/<cell>`, then stability reports for
// every pair of seeds sharing the remaining settings.
GridResult run_grid(const GridConfig& grid, const std::filesystem::path& out_dir, Exec exec = Exec::kParallel);

inline constexpr const char* kGridManifestFile = "grid_manifest.json";

}  // namespace ppmx
