#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinfridge/errors.hpp"
#include "spinfridge/runner/experiments.hpp"
#include "spinfridge/runner/manifest.hpp"

namespace {

using namespace spinfridge::runner;

struct Flags {
  std::string manifest;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool verbose = false;
};

void add_flags(CLI::App* cmd, Flags& f, bool manifest_required) {
  auto* m = cmd->add_option("--manifest", f.manifest, "JSON run manifest");
  if (manifest_required) m->required();
  cmd->add_option("--out", f.out, "output directory (overrides the manifest)");
  cmd->add_option("--seed", f.seed, "RNG seed (overrides the manifest)");
  cmd->add_option("--threads", f.threads, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--verbose", f.verbose, "progress output");
}

int threads_from(const Flags& f, const RunManifest& m) {
  if (f.threads) return *f.threads;
  if (const char* env = std::getenv("SPINFRIDGE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 0) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError("SPINFRIDGE_THREADS", 0, "expected a non-negative integer");
  }
  return m.threads;
}

int execute(const Flags& f, std::optional<ExperimentKind> kind) {
  RunManifest m = f.manifest.empty() ? default_manifest(*kind) : load_manifest(f.manifest);
  if (kind && m.kind != *kind) {
    throw ConfigError("kind", 0,
                      std::string("manifest is a '") + kind_name(m.kind) + "' run, not '" + kind_name(*kind) + "'");
  }
  if (!f.out.empty()) m.out = f.out;
  if (f.seed) m.seed = *f.seed;
  RunOptions opt;
  opt.threads = threads_from(f, m);
  opt.verbose = f.verbose;
  opt.log = &std::cerr;
  const RunResult r = run_experiment(m, opt);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinfridge: probe-based refrigeration and thermometry of thermal qubits"};
  app.set_version_flag("--version", std::string("spinfridge ") + kToolVersion);
  app.require_subcommand(1);

  Flags flags;
  std::optional<ExperimentKind> kind;
  struct Sub {
    const char* name;
    const char* help;
    std::optional<ExperimentKind> kind;
  };
  const Sub subs[] = {
      {"run", "run any manifest", std::nullopt},
      {"cool", "cooling efficiency per step (fig. 2)", ExperimentKind::Cool},
      {"thermometry", "pseudo-thermalization and temperature estimates (fig. 3)", ExperimentKind::Thermometry},
      {"sweep", "parameter sweep over gamma or J_I (figs. 4, 5)", ExperimentKind::Sweep},
      {"verify", "theorem oracles, JSON verdicts", ExperimentKind::Verify},
      {"nv-coupling", "NV chain couplings, WAHUHA check and yield", ExperimentKind::NvCoupling},
  };
  for (const Sub& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_flags(cmd, flags, !s.kind.has_value());
    cmd->callback([&kind, s] { kind = s.kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    return execute(flags, kind);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const spinfridge::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const spinfridge::IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << " at t = " << e.time() << ", step = " << e.step()
              << ", error norm = " << e.error_norm() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}
