#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinfridge/runner/experiments.hpp"
#include "spinfridge/runner/manifest.hpp"

using namespace spinfridge::runner;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Golden : public ::testing::TestWithParam<std::string> {};

}  // namespace

// Regenerate with: spinfridge run --manifest tests/golden/manifests/<name>.json --out tests/golden
TEST_P(Golden, MatchesStoredOutput) {
  const fs::path dir = SPINFRIDGE_GOLDEN_DIR;
  RunManifest m = load_manifest(dir / "manifests" / (GetParam() + ".json"));
  m.out = fs::temp_directory_path() / "spinfridge_golden";
  const RunResult r = run_experiment(m, {});
  ASSERT_EQ(r.exit_code, kExitOk);
  ASSERT_FALSE(r.files.empty());
  for (const fs::path& f : r.files) {
    const fs::path expected = dir / f.filename();
    ASSERT_TRUE(fs::exists(expected)) << expected;
    EXPECT_EQ(slurp(f), slurp(expected)) << f.filename();
  }
}

INSTANTIATE_TEST_SUITE_P(Manifests, Golden,
                         ::testing::Values("cool_small", "sweep_small", "thermometry_small", "nv_small"));
