#pragma once

#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinfridge/runner/manifest.hpp"

namespace spinfridge::runner {

enum ExitCode : int { kExitOk = 0, kExitOracleFailure = 1, kExitConfigError = 2, kExitNumericalFailure = 3 };

struct RunOptions {
  /// 0 = hardware concurrency.
  int threads = 1;
  bool verbose = false;
  /// Progress and failure diagnostics; null silences them.
  std::ostream* log = nullptr;
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  /// One line per failed grid point or oracle.
  std::vector<std::string> failures;
};

RunResult run_experiment(const RunManifest& manifest, const RunOptions& options);

/// Resolve --threads / SPINFRIDGE_THREADS / manifest into a worker count >= 1.
int resolve_threads(int requested);

/// Run fn(0..count-1) on up to `threads` workers. Slot i of the result holds
/// the exception thrown by fn(i), if any.
std::vector<std::exception_ptr> parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Column label for a grid key (probe_size -> N, interaction_strength -> J_I).
std::string grid_column(const std::string& key);

}  // namespace spinfridge::runner
