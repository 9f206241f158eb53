#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinfridge/oracles.hpp"
#include "spinfridge/protocol.hpp"

namespace spinfridge::runner {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Schema violation; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, int line, const std::string& what);

  const std::string& field() const noexcept { return field_; }
  /// 1-based line in the manifest, 0 when unknown.
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

enum class ExperimentKind { Cool, Thermometry, Sweep, NvCoupling, Verify };

const char* kind_name(ExperimentKind kind);

/// One parameter swept over a list of values; empty key means a single point.
struct Grid {
  std::string key;
  std::vector<double> values;
};

struct ThermometryOptions {
  /// 0 disables the sampled estimator.
  std::uint64_t shots_per_site = 0;
};

/// User geometry for the nv-coupling table; frames use the lab-x gauge.
struct NvPairSpec {
  std::string name;
  std::array<double, 3> axis1{0, 0, 1};
  std::array<double, 3> axis2{0, 0, 1};
  /// Positions in nm.
  std::array<double, 3> position1{0, 0, 0};
  std::array<double, 3> position2{0, 0, 1};
};

struct NvOptions {
  double r_nm = 25.0;
  bool field_gauge = true;
  std::vector<int> yield_sizes{6};
  /// tau = factor / largest |bond coefficient|.
  double wahuha_tau_factor = 0.05;
  std::vector<NvPairSpec> pairs;
};

struct VerifyOptions {
  std::vector<std::string> oracles{"always_cools", "stationary_state", "entropy_bounds", "majorization"};
  AlwaysCoolsOptions always_cools;
  StationaryOptions stationary;
  MajorizationOptions majorization;
  int entropy_probe_max = 4;
  int entropy_steps = 10;
};

struct RunManifest {
  int schema_version = kSchemaVersion;
  ExperimentKind kind = ExperimentKind::Cool;
  /// Stem of the output files.
  std::string name;
  std::filesystem::path out = "results";
  std::uint64_t seed = 0;
  int threads = 0;
  ProtocolConfig config;
  Grid grid;
  ThermometryOptions thermometry;
  NvOptions nv;
  VerifyOptions verify;
  /// FNV-1a 64 of the canonical JSON dump.
  std::uint64_t hash = 0;
};

RunManifest parse_manifest(const std::string& text);
RunManifest load_manifest(const std::filesystem::path& path);
/// Built-in manifest used when a subcommand is given no --manifest.
RunManifest default_manifest(ExperimentKind kind);

std::uint64_t fnv1a64(const std::string& bytes);

/// Apply one grid value to a configuration.
void apply_grid_value(ProtocolConfig& cfg, const std::string& key, double value);

}  // namespace spinfridge::runner
