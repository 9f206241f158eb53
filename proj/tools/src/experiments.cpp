#include "spinfridge/runner/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "spinfridge/errors.hpp"
#include "spinfridge/nv_physics.hpp"
#include "spinfridge/oracles.hpp"
#include "spinfridge/runner/csv.hpp"
#include "spinfridge/thermometry.hpp"

namespace spinfridge::runner {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct Point {
  int index = 0;
  double value = 0.0;
  ProtocolConfig config;
};

std::vector<Point> grid_points(const RunManifest& m) {
  std::vector<Point> pts;
  if (m.grid.key.empty()) {
    Point p;
    p.config = m.config;
    p.value = m.config.probe_size;
    pts.push_back(p);
    return pts;
  }
  for (std::size_t i = 0; i < m.grid.values.size(); ++i) {
    Point p;
    p.index = static_cast<int>(i);
    p.value = m.grid.values[i];
    p.config = m.config;
    apply_grid_value(p.config, m.grid.key, p.value);
    pts.push_back(p);
  }
  return pts;
}

// output order: by grid value, then by position in the manifest
std::vector<std::size_t> sorted_order(const std::vector<Point>& pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a].value < pts[b].value; });
  return order;
}

std::string describe(const std::exception_ptr& e, int& code) {
  try {
    std::rethrow_exception(e);
  } catch (const IntegrationError& x) {
    code = std::max(code, static_cast<int>(kExitNumericalFailure));
    std::ostringstream os;
    os << "integration failure: " << x.what() << " (t = " << format_number(x.time())
       << ", step = " << format_number(x.step()) << ", error norm = " << format_number(x.error_norm()) << ")";
    return os.str();
  } catch (const StateError& x) {
    code = std::max(code, static_cast<int>(kExitNumericalFailure));
    return std::string("state error: ") + x.what();
  } catch (const DomainError& x) {
    code = std::max(code, static_cast<int>(kExitConfigError));
    return std::string("domain error: ") + x.what();
  } catch (const std::exception& x) {
    code = std::max(code, static_cast<int>(kExitNumericalFailure));
    return x.what();
  }
}

struct PointRuns {
  std::vector<Point> points;
  std::vector<std::optional<ProtocolReport>> reports;
};

PointRuns run_points(const RunManifest& m, const RunOptions& opt, RunResult& result, bool keep_states) {
  PointRuns runs;
  runs.points = grid_points(m);
  runs.reports.resize(runs.points.size());
  std::mutex log_mutex;
  auto errs = parallel_for(static_cast<int>(runs.points.size()), resolve_threads(opt.threads), [&](int i) {
    ProtocolConfig cfg = runs.points[static_cast<std::size_t>(i)].config;
    cfg.record_probe_states = keep_states;
    runs.reports[static_cast<std::size_t>(i)] = run_protocol(cfg);
    if (opt.verbose && opt.log) {
      std::lock_guard lock(log_mutex);
      *opt.log << "  point " << grid_column(m.grid.key) << " = "
               << format_number(runs.points[static_cast<std::size_t>(i)].value) << " done\n";
    }
  });
  for (std::size_t i = 0; i < errs.size(); ++i) {
    if (!errs[i]) continue;
    std::ostringstream os;
    os << "grid point " << grid_column(m.grid.key) << " = " << format_number(runs.points[i].value) << ": "
       << describe(errs[i], result.exit_code);
    result.failures.push_back(os.str());
  }
  return runs;
}

std::filesystem::path out_file(const RunManifest& m, const std::string& suffix) {
  return m.out / (m.name + suffix + ".csv");
}

void run_cool(const RunManifest& m, const RunOptions& opt, RunResult& result) {
  PointRuns runs = run_points(m, opt, result, false);
  const std::string header = provenance_header(m.hash, m.seed);
  CsvWriter csv(out_file(m, ""), header, {grid_column(m.grid.key), "k", "eta_k"});
  for (std::size_t i : sorted_order(runs.points)) {
    if (!runs.reports[i]) continue;
    for (const StepRecord& s : runs.reports[i]->steps) {
      csv.row({runs.points[i].value, static_cast<long long>(s.k), s.eta});
    }
  }
  csv.close();
  result.files.push_back(csv.path());
}

void run_thermometry(const RunManifest& m, const RunOptions& opt, RunResult& result) {
  const bool sample = m.thermometry.shots_per_site > 0;
  PointRuns runs = run_points(m, opt, result, sample);
  const std::string header = provenance_header(m.hash, m.seed);
  CsvWriter csv(out_file(m, ""), header, {grid_column(m.grid.key), "k", "trace_distance"});
  for (std::size_t i : sorted_order(runs.points)) {
    if (!runs.reports[i]) continue;
    const ProtocolReport& r = *runs.reports[i];
    csv.row({runs.points[i].value, 0LL, r.initial_distance});
    for (const StepRecord& s : r.steps) csv.row({runs.points[i].value, static_cast<long long>(s.k), s.distance_to_pseudothermal});
  }
  csv.close();
  result.files.push_back(csv.path());
  if (!sample) return;

  CsvWriter est(out_file(m, "_estimates"), header,
                {grid_column(m.grid.key), "k", "beta_true", "beta_hat", "stderr", "n0", "n1"});
  for (std::size_t i : sorted_order(runs.points)) {
    if (!runs.reports[i]) continue;
    const ProtocolReport& r = *runs.reports[i];
    for (std::size_t k = 0; k < r.probe_states.size(); ++k) {
      const std::uint64_t seed = splitmix64(m.seed ^ splitmix64((static_cast<std::uint64_t>(runs.points[i].index) << 32) | k));
      const TemperatureEstimate e = estimate_temperature(r.probe_states[k], m.thermometry.shots_per_site, seed);
      est.row({runs.points[i].value, static_cast<long long>(k), r.config.bath_beta, e.beta_tilde, e.stderr_beta,
               static_cast<long long>(e.n0), static_cast<long long>(e.n1)});
    }
  }
  est.close();
  result.files.push_back(est.path());
}

void run_sweep(const RunManifest& m, const RunOptions& opt, RunResult& result) {
  PointRuns runs = run_points(m, opt, result, false);
  const std::string header = provenance_header(m.hash, m.seed);
  CsvWriter csv(out_file(m, ""), header, {grid_column(m.grid.key), "k", "eta_k", "dS_total", "S_probe", "trace_distance"});
  for (std::size_t i : sorted_order(runs.points)) {
    if (!runs.reports[i]) continue;
    const ProtocolReport& r = *runs.reports[i];
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
      const StepRecord& s = r.steps[k];
      csv.row({runs.points[i].value, static_cast<long long>(s.k), s.eta, r.delta_S_total[k], s.probe_entropy,
               s.distance_to_pseudothermal});
    }
  }
  csv.close();
  result.files.push_back(csv.path());
}

void run_nv(const RunManifest& m, RunResult& result) {
  const DipolarPair pair = alternating_chain_pair(m.nv.r_nm, m.nv.field_gauge);
  const DipolarCoefficients c = dipolar_coefficients(pair);
  const NvNvHamiltonian h = nv_nv_effective_hamiltonian(pair);
  const NvP1Coupling p1 = nv_p1_coupling(pair);
  const double scale = std::max({std::abs(h.xx_yy_coeff), std::abs(h.zz_coeff), std::abs(h.xy_antisym_coeff),
                                 std::abs(h.heisenberg_strength)});
  const double tau = m.nv.wahuha_tau_factor / scale;
  const WahuhaCheck w1 = wahuha_average_check(pair, tau);
  const WahuhaCheck w2 = wahuha_average_check(pair, tau / 2.0);

  CsvWriter csv(out_file(m, ""), provenance_header(m.hash, m.seed), {"quantity", "value"});
  auto put = [&](const std::string& name, double v) { csv.row({name, v}); };
  put("r_nm", m.nv.r_nm);
  put("g_plus", c.g_plus);
  put("g_minus", c.g_minus);
  put("h_plus", c.h_plus);
  put("h_minus", c.h_minus);
  put("q", c.q);
  put("xx_yy_khz", to_khz(h.xx_yy_coeff));
  put("zz_khz", to_khz(h.zz_coeff));
  put("xy_antisym_khz", to_khz(h.xy_antisym_coeff));
  put("heisenberg_khz", to_khz(h.heisenberg_strength));
  put("heisenberg_invariant_khz", to_khz(h.heisenberg_strength_invariant));
  put("nv_p1_ising_khz", to_khz(p1.ising_strength));
  put("nv_p1_hhcp_khz", to_khz(p1.hhcp_flipflop_strength));
  put("wahuha_tau_s", tau);
  put("wahuha_error_tau", w1.trotter_error);
  put("wahuha_error_half_tau", w2.trotter_error);
  put("wahuha_error_ratio", w1.trotter_error / w2.trotter_error);
  put("wahuha_h_minus_residual", w1.h_minus_residual);
  for (int n : m.nv.yield_sizes) csv.row({"chain_yield_" + std::to_string(n), chain_yield(n).decimal});
  csv.close();
  result.files.push_back(csv.path());
  if (m.nv.pairs.empty()) return;

  CsvWriter table(out_file(m, "_pairs"), provenance_header(m.hash, m.seed),
                  {"pair", "r_nm", "g_plus", "g_minus", "h_plus", "h_minus", "q", "xx_yy_khz", "zz_khz",
                   "xy_antisym_khz", "heisenberg_khz", "nv_p1_ising_khz"});
  for (const NvPairSpec& spec : m.nv.pairs) {
    const Vec3 p1(spec.position1[0], spec.position1[1], spec.position1[2]);
    const Vec3 p2(spec.position2[0], spec.position2[1], spec.position2[2]);
    const Vec3 a1(spec.axis1[0], spec.axis1[1], spec.axis1[2]);
    const Vec3 a2(spec.axis2[0], spec.axis2[1], spec.axis2[2]);
    if (a1.norm() == 0.0 || a2.norm() == 0.0) throw DomainError("pair " + spec.name + ": zero axis");
    DipolarPair pair;
    pair.frame1 = SpinFrame::from_axis(a1.normalized());
    pair.frame2 = SpinFrame::from_axis(a2.normalized());
    pair.r = (p2 - p1).norm();
    if (!(pair.r > 0.0)) throw DomainError("pair " + spec.name + ": coincident positions");
    pair.rhat = (p2 - p1) / pair.r;
    const DipolarCoefficients pc = dipolar_coefficients(pair);
    const NvNvHamiltonian ph = nv_nv_effective_hamiltonian(pair);
    table.row({spec.name, pair.r, pc.g_plus, pc.g_minus, pc.h_plus, pc.h_minus, pc.q, to_khz(ph.xx_yy_coeff),
               to_khz(ph.zz_coeff), to_khz(ph.xy_antisym_coeff), to_khz(ph.heisenberg_strength),
               to_khz(nv_p1_coupling(pair).ising_strength)});
  }
  table.close();
  result.files.push_back(table.path());
}

nlohmann::json verdict_json(const OracleVerdict& v) {
  nlohmann::json j{{"name", v.name},
                   {"pass", v.pass},
                   {"trials", v.trials},
                   {"worst_margin", format_number(v.worst_margin)},
                   {"secondary", v.secondary}};
  if (v.witness) {
    nlohmann::json w{{"description", v.witness->description},
                     {"trial", v.witness->trial},
                     {"trial_seed", v.witness->trial_seed}};
    nlohmann::json values = nlohmann::json::object();
    for (const auto& [k, x] : v.witness->values) values[k] = format_number(x);
    w["values"] = values;
    j["witness"] = w;
  }
  return j;
}

std::vector<ProtocolReport> entropy_reports(const VerifyOptions& v) {
  std::vector<ProtocolReport> reports;
  for (int n = 1; n <= v.entropy_probe_max; ++n) {
    ProtocolConfig c;
    c.probe_size = n;
    c.steps = v.entropy_steps;
    reports.push_back(run_protocol(c));
    c.gamma = 0.3;
    reports.push_back(run_protocol(c));
    c.gamma = 0.0;
    c.swap = SwapSpec::partial(2.0);
    reports.push_back(run_protocol(c));
  }
  return reports;
}

void run_verify(const RunManifest& m, const RunOptions& opt, RunResult& result) {
  VerifyOptions v = m.verify;
  const int threads = resolve_threads(opt.threads);
  v.always_cools.threads = v.stationary.threads = v.majorization.threads = threads;
  if (m.seed != 0) {
    v.always_cools.seed = splitmix64(m.seed + 1);
    v.stationary.seed = splitmix64(m.seed + 2);
    v.majorization.seed = splitmix64(m.seed + 3);
  }
  nlohmann::json verdicts = nlohmann::json::array();
  for (const std::string& name : v.oracles) {
    OracleVerdict verdict;
    try {
      if (name == "always_cools") {
        verdict = oracle_always_cools(v.always_cools);
      } else if (name == "stationary_state") {
        verdict = oracle_stationary_state(v.stationary);
      } else if (name == "majorization") {
        verdict = oracle_majorization(v.majorization);
      } else {
        const auto reports = entropy_reports(v);
        verdict = oracle_entropy_bounds(reports);
      }
    } catch (...) {
      result.failures.push_back(name + ": " + describe(std::current_exception(), result.exit_code));
      continue;
    }
    if (opt.log) {
      *opt.log << (verdict.pass ? "PASS " : "FAIL ") << verdict.name << " trials=" << verdict.trials
               << " worst_margin=" << format_number(verdict.worst_margin) << " (" << format_number(verdict.seconds)
               << " s)\n";
    }
    if (!verdict.pass) {
      result.exit_code = std::max(result.exit_code, static_cast<int>(kExitOracleFailure));
      result.failures.push_back(name + ": oracle failed" +
                                (verdict.witness ? " (" + verdict.witness->description + ")" : std::string()));
    }
    verdicts.push_back(verdict_json(verdict));
  }
  nlohmann::json doc{{"tool", std::string("spinfridge ") + kToolVersion},
                     {"manifest_fnv1a64", hex64(m.hash)},
                     {"seed", m.seed},
                     {"verdicts", verdicts}};
  std::filesystem::create_directories(m.out);
  const auto path = m.out / (m.name + ".json");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("error writing " + path.string());
  result.files.push_back(path);
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<std::exception_ptr> parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(count, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int n = std::clamp(threads, 1, std::max(count, 1));
  if (n == 1) {
    worker();
    return errors;
  }
  std::vector<std::jthread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  return errors;
}

std::string grid_column(const std::string& key) {
  if (key.empty() || key == "probe_size") return "N";
  if (key == "kt_over_omega") return "kT_over_omega";
  if (key == "bath_beta") return "beta_tilde";
  if (key == "interaction_strength") return "J_I";
  if (key == "coupling") return "J";
  if (key == "fixed_tau") return "J_tau";
  return key;
}

RunResult run_experiment(const RunManifest& manifest, const RunOptions& options) {
  RunResult result;
  if (options.log) {
    *options.log << "spinfridge " << kToolVersion << ": " << kind_name(manifest.kind) << " '" << manifest.name
                 << "' -> " << manifest.out.string() << "\n";
  }
  switch (manifest.kind) {
    case ExperimentKind::Cool: run_cool(manifest, options, result); break;
    case ExperimentKind::Thermometry: run_thermometry(manifest, options, result); break;
    case ExperimentKind::Sweep: run_sweep(manifest, options, result); break;
    case ExperimentKind::NvCoupling: run_nv(manifest, result); break;
    case ExperimentKind::Verify: run_verify(manifest, options, result); break;
  }
  if (options.log) {
    for (const auto& f : result.failures) *options.log << "error: " << f << "\n";
    for (const auto& f : result.files) *options.log << "wrote " << f.string() << "\n";
  }
  return result;
}

}  // namespace spinfridge::runner
