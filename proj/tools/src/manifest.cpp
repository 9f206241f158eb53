#include "spinfridge/runner/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spinfridge/errors.hpp"

namespace spinfridge::runner {

using nlohmann::json;

ConfigError::ConfigError(const std::string& field, int line, const std::string& what)
    : std::runtime_error([&] {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        if (!field.empty()) os << field << ": ";
        os << what;
        return os.str();
      }()),
      field_(field),
      line_(line) {}

const char* kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Cool: return "cool";
    case ExperimentKind::Thermometry: return "thermometry";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::NvCoupling: return "nv-coupling";
    case ExperimentKind::Verify: return "verify";
  }
  return "?";
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  // Line of the key at the end of `path`, found by walking the components in
  // order through the raw text.
  int line_of(const std::string& path) const {
    std::size_t pos = 0;
    std::stringstream ss(path);
    std::string part;
    bool found = false;
    while (std::getline(ss, part, '.')) {
      const auto bracket = part.find('[');
      if (bracket != std::string::npos) part = part.substr(0, bracket);
      const auto hit = text_.find("\"" + part + "\"", pos);
      if (hit == std::string::npos) break;
      pos = hit + 1;
      found = true;
    }
    if (!found) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(path, line_of(path), what);
  }

  void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
      if (!allowed.count(k)) fail(join(path, k), "unknown field");
    }
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) fail(join(path, key), "expected a number");
    return v.get<double>();
  }

  long long integer(const json& obj, const std::string& path, const char* key, long long fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    return v.get<long long>();
  }

  std::uint64_t unsigned_integer(const json& obj, const std::string& path, const char* key,
                                 std::uint64_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      fail(join(path, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(join(path, key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& obj, const std::string& path, const char* key, const std::string& fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const std::string& path, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_array()) fail(join(path, key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(join(path, key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  const std::string& text_;
};

void parse_integrator(const Reader& r, const json& j, const std::string& path, IntegratorConfig& c) {
  r.allow_keys(j, path, {"rel_tol", "abs_tol", "initial_step", "max_step", "min_step", "max_steps", "propagator"});
  c.rel_tol = r.number(j, path, "rel_tol", c.rel_tol);
  c.abs_tol = r.number(j, path, "abs_tol", c.abs_tol);
  c.initial_step = r.number(j, path, "initial_step", c.initial_step);
  c.max_step = r.number(j, path, "max_step", c.max_step);
  c.min_step = r.number(j, path, "min_step", c.min_step);
  c.max_steps = r.integer(j, path, "max_steps", c.max_steps);
  const std::string p = r.string(j, path, "propagator", "auto");
  if (p == "auto") {
    c.propagator = Propagator::Auto;
  } else if (p == "rkf45") {
    c.propagator = Propagator::Rkf45;
  } else if (p == "spectral") {
    c.propagator = Propagator::Spectral;
  } else {
    r.fail(Reader::join(path, "propagator"), "expected auto, rkf45 or spectral");
  }
}

void parse_swap(const Reader& r, const json& j, const std::string& path, SwapSpec& s) {
  r.allow_keys(j, path, {"mode", "interaction_strength", "background", "qubit_gap", "gamma", "dephase_qubit"});
  const std::string mode = r.string(j, path, "mode", s.mode == SwapMode::Partial ? "partial" : "perfect");
  if (mode == "perfect") {
    s.mode = SwapMode::Perfect;
  } else if (mode == "partial") {
    s.mode = SwapMode::Partial;
  } else {
    r.fail(Reader::join(path, "mode"), "expected perfect or partial");
  }
  s.interaction_strength = r.number(j, path, "interaction_strength", s.interaction_strength);
  s.background = r.boolean(j, path, "background", s.background);
  s.qubit_gap = r.number(j, path, "qubit_gap", s.qubit_gap);
  if (j.contains("gamma")) s.gamma = r.number(j, path, "gamma", 0.0);
  s.dephase_qubit = r.boolean(j, path, "dephase_qubit", s.dephase_qubit);
}

void parse_config(const Reader& r, const json& j, const std::string& path, ProtocolConfig& c) {
  r.allow_keys(j, path,
               {"probe_size", "coupling", "gamma", "bath_beta", "kt_over_omega", "probe_betas", "steps", "policy",
                "fixed_tau", "tau_max", "optimize_on", "swap", "integrator", "enforce_cooler_probe"});
  c.probe_size = static_cast<int>(r.integer(j, path, "probe_size", c.probe_size));
  c.coupling = r.number(j, path, "coupling", c.coupling);
  c.gamma = r.number(j, path, "gamma", c.gamma);
  if (j.contains("bath_beta") && j.contains("kt_over_omega")) {
    r.fail(Reader::join(path, "kt_over_omega"), "give either bath_beta or kt_over_omega");
  }
  c.bath_beta = r.number(j, path, "bath_beta", c.bath_beta);
  if (j.contains("kt_over_omega")) {
    const double t = r.number(j, path, "kt_over_omega", 0.0);
    if (!(t > 0.0)) r.fail(Reader::join(path, "kt_over_omega"), "must be positive");
    c.bath_beta = 1.0 / t;
  }
  if (j.contains("probe_betas")) c.probe_betas = r.numbers(j, path, "probe_betas");
  c.steps = static_cast<int>(r.integer(j, path, "steps", c.steps));
  const std::string policy =
      r.string(j, path, "policy", c.policy == WaitingPolicy::Fixed ? "fixed" : "optimized");
  if (policy == "optimized") {
    c.policy = WaitingPolicy::Optimized;
  } else if (policy == "fixed") {
    c.policy = WaitingPolicy::Fixed;
  } else {
    r.fail(Reader::join(path, "policy"), "expected optimized or fixed");
  }
  c.fixed_tau = r.number(j, path, "fixed_tau", c.fixed_tau);
  c.tau_max = r.number(j, path, "tau_max", c.tau_max);
  const std::string target = r.string(j, path, "optimize_on",
                                      c.optimize_on == OptimizationTarget::IdealShadow ? "ideal_shadow" : "current_state");
  if (target == "ideal_shadow") {
    c.optimize_on = OptimizationTarget::IdealShadow;
  } else if (target == "current_state") {
    c.optimize_on = OptimizationTarget::CurrentState;
  } else {
    r.fail(Reader::join(path, "optimize_on"), "expected ideal_shadow or current_state");
  }
  if (j.contains("swap")) parse_swap(r, j.at("swap"), Reader::join(path, "swap"), c.swap);
  if (j.contains("integrator")) parse_integrator(r, j.at("integrator"), Reader::join(path, "integrator"), c.integrator);
  c.enforce_cooler_probe = r.boolean(j, path, "enforce_cooler_probe", c.enforce_cooler_probe);
}

const std::set<std::string>& grid_keys() {
  static const std::set<std::string> keys{"probe_size", "bath_beta",     "kt_over_omega", "gamma",
                                          "coupling",   "interaction_strength", "fixed_tau"};
  return keys;
}

void parse_verify(const Reader& r, const json& j, const std::string& path, VerifyOptions& v) {
  r.allow_keys(j, path, {"oracles", "always_cools", "stationary_state", "majorization", "entropy_bounds"});
  if (j.contains("oracles")) {
    const json& list = j.at("oracles");
    if (!list.is_array()) r.fail(Reader::join(path, "oracles"), "expected an array of oracle names");
    v.oracles.clear();
    for (const auto& x : list) {
      static const std::set<std::string> known{"always_cools", "stationary_state", "entropy_bounds", "majorization"};
      if (!x.is_string() || !known.count(x.get<std::string>())) {
        r.fail(Reader::join(path, "oracles"), "unknown oracle name");
      }
      v.oracles.push_back(x.get<std::string>());
    }
  }
  if (j.contains("always_cools")) {
    const std::string p = Reader::join(path, "always_cools");
    const json& a = j.at("always_cools");
    r.allow_keys(a, p, {"max_sites", "trials", "steps_per_trial", "gamma_max", "interaction_min", "interaction_max",
                        "partial_fraction", "check_channels"});
    auto& o = v.always_cools;
    o.max_sites = static_cast<int>(r.integer(a, p, "max_sites", o.max_sites));
    o.trials = static_cast<int>(r.integer(a, p, "trials", o.trials));
    o.steps_per_trial = static_cast<int>(r.integer(a, p, "steps_per_trial", o.steps_per_trial));
    o.gamma_max = r.number(a, p, "gamma_max", o.gamma_max);
    o.interaction_min = r.number(a, p, "interaction_min", o.interaction_min);
    o.interaction_max = r.number(a, p, "interaction_max", o.interaction_max);
    o.partial_fraction = r.number(a, p, "partial_fraction", o.partial_fraction);
    o.check_channels = r.boolean(a, p, "check_channels", o.check_channels);
  }
  if (j.contains("stationary_state")) {
    const std::string p = Reader::join(path, "stationary_state");
    const json& a = j.at("stationary_state");
    r.allow_keys(a, p, {"max_sites", "tau_samples", "gammas", "bath_beta", "interaction_strength", "tol"});
    auto& o = v.stationary;
    o.max_sites = static_cast<int>(r.integer(a, p, "max_sites", o.max_sites));
    o.tau_samples = static_cast<int>(r.integer(a, p, "tau_samples", o.tau_samples));
    if (a.contains("gammas")) o.gammas = r.numbers(a, p, "gammas");
    o.bath_beta = r.number(a, p, "bath_beta", o.bath_beta);
    o.interaction_strength = r.number(a, p, "interaction_strength", o.interaction_strength);
    o.tol = r.number(a, p, "tol", o.tol);
  }
  if (j.contains("majorization")) {
    const std::string p = Reader::join(path, "majorization");
    const json& a = j.at("majorization");
    r.allow_keys(a, p, {"max_sites", "trials", "gamma_max", "tau_max"});
    auto& o = v.majorization;
    o.max_sites = static_cast<int>(r.integer(a, p, "max_sites", o.max_sites));
    o.trials = static_cast<int>(r.integer(a, p, "trials", o.trials));
    o.gamma_max = r.number(a, p, "gamma_max", o.gamma_max);
    o.tau_max = r.number(a, p, "tau_max", o.tau_max);
  }
  if (j.contains("entropy_bounds")) {
    const std::string p = Reader::join(path, "entropy_bounds");
    const json& a = j.at("entropy_bounds");
    r.allow_keys(a, p, {"max_sites", "steps"});
    v.entropy_probe_max = static_cast<int>(r.integer(a, p, "max_sites", v.entropy_probe_max));
    v.entropy_steps = static_cast<int>(r.integer(a, p, "steps", v.entropy_steps));
  }
}

void check_ranges(const Reader& r, const RunManifest& m) {
  if (m.kind == ExperimentKind::Cool || m.kind == ExperimentKind::Thermometry || m.kind == ExperimentKind::Sweep) {
    if (m.kind == ExperimentKind::Sweep && m.grid.values.empty()) r.fail("grid", "sweep needs a non-empty grid");
    std::vector<double> values = m.grid.values;
    if (values.empty()) values.push_back(0.0);
    for (double v : values) {
      ProtocolConfig c = m.config;
      if (!m.grid.key.empty()) apply_grid_value(c, m.grid.key, v);
      try {
        c.validate();
      } catch (const DomainError& e) {
        r.fail(m.grid.key.empty() ? "config" : "grid." + m.grid.key, e.what());
      }
    }
  }
  if (m.kind == ExperimentKind::NvCoupling) {
    if (!(m.nv.r_nm > 0.0)) r.fail("nv.r_nm", "separation must be positive");
    for (int n : m.nv.yield_sizes) {
      if (n < 1) r.fail("nv.yield_sizes", "chain length must be >= 1");
    }
  }
}

}  // namespace

void apply_grid_value(ProtocolConfig& cfg, const std::string& key, double value) {
  if (key == "probe_size") {
    if (value != std::floor(value)) throw DomainError("probe_size grid values must be integers");
    cfg.probe_size = static_cast<int>(value);
    if (!cfg.probe_betas.empty()) cfg.probe_betas.assign(static_cast<std::size_t>(cfg.probe_size), cfg.probe_betas[0]);
  } else if (key == "bath_beta") {
    cfg.bath_beta = value;
  } else if (key == "kt_over_omega") {
    if (!(value > 0.0)) throw DomainError("kt_over_omega must be positive");
    cfg.bath_beta = 1.0 / value;
  } else if (key == "gamma") {
    cfg.gamma = value;
  } else if (key == "coupling") {
    cfg.coupling = value;
  } else if (key == "interaction_strength") {
    SwapSpec s = cfg.swap;
    s.mode = SwapMode::Partial;
    s.interaction_strength = value;
    cfg.swap = s;
  } else if (key == "fixed_tau") {
    cfg.fixed_tau = value;
  } else {
    throw DomainError("unknown grid key " + key);
  }
}

RunManifest parse_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ConfigError("", line, std::string("malformed JSON: ") + e.what());
  }
  Reader r(text);
  r.allow_keys(j, "", {"schema_version", "kind", "name", "out", "seed", "threads", "config", "grid", "thermometry", "nv",
                       "verify"});
  RunManifest m;
  if (!j.contains("schema_version")) r.fail("schema_version", "missing");
  m.schema_version = static_cast<int>(r.integer(j, "", "schema_version", 0));
  if (m.schema_version != kSchemaVersion) {
    r.fail("schema_version", "unsupported version " + std::to_string(m.schema_version) + " (this tool reads " +
                                 std::to_string(kSchemaVersion) + ")");
  }
  if (!j.contains("kind")) r.fail("kind", "missing");
  const std::string kind = r.string(j, "", "kind", "");
  if (kind == "cool") {
    m.kind = ExperimentKind::Cool;
  } else if (kind == "thermometry") {
    m.kind = ExperimentKind::Thermometry;
  } else if (kind == "sweep") {
    m.kind = ExperimentKind::Sweep;
  } else if (kind == "nv-coupling") {
    m.kind = ExperimentKind::NvCoupling;
  } else if (kind == "verify") {
    m.kind = ExperimentKind::Verify;
  } else {
    r.fail("kind", "expected cool, thermometry, sweep, nv-coupling or verify");
  }
  m.name = r.string(j, "", "name", kind_name(m.kind));
  if (m.name.empty() || m.name.find('/') != std::string::npos) r.fail("name", "must be a plain file stem");
  m.out = r.string(j, "", "out", "results");
  m.seed = r.unsigned_integer(j, "", "seed", 0);
  m.threads = static_cast<int>(r.integer(j, "", "threads", 0));
  if (m.threads < 0) r.fail("threads", "must be >= 0");

  if (m.kind == ExperimentKind::Thermometry) {
    m.config.policy = WaitingPolicy::Fixed;
    m.config.fixed_tau = 1.0;
  }
  if (j.contains("config")) parse_config(r, j.at("config"), "config", m.config);

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_object() || g.size() != 1) r.fail("grid", "expected an object with exactly one key");
    const auto it = g.begin();
    if (!grid_keys().count(it.key())) r.fail("grid." + it.key(), "unknown grid key");
    m.grid.key = it.key();
    m.grid.values = r.numbers(g, "grid", it.key().c_str());
    if (m.grid.values.empty()) r.fail("grid." + it.key(), "grid must not be empty");
    for (double v : m.grid.values) {
      if (!std::isfinite(v)) r.fail("grid." + it.key(), "grid values must be finite");
    }
  }
  if (j.contains("thermometry")) {
    const json& t = j.at("thermometry");
    r.allow_keys(t, "thermometry", {"shots_per_site"});
    m.thermometry.shots_per_site = r.unsigned_integer(t, "thermometry", "shots_per_site", 0);
  }
  if (j.contains("nv")) {
    const json& n = j.at("nv");
    r.allow_keys(n, "nv", {"r_nm", "field_gauge", "yield_sizes", "wahuha_tau_factor", "pairs"});
    if (n.contains("pairs")) {
      const json& list = n.at("pairs");
      if (!list.is_array()) r.fail("nv.pairs", "expected an array of pair objects");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = "nv.pairs[" + std::to_string(i) + "]";
        const json& e = list[i];
        r.allow_keys(e, p, {"name", "axis1", "axis2", "position1", "position2"});
        NvPairSpec spec;
        spec.name = r.string(e, p, "name", "pair" + std::to_string(i));
        auto vec3 = [&](const char* key, std::array<double, 3>& out) {
          if (!e.contains(key)) r.fail(p + "." + key, "missing");
          const auto v = r.numbers(e, p, key);
          if (v.size() != 3) r.fail(p + "." + key, "expected three components");
          std::copy(v.begin(), v.end(), out.begin());
        };
        vec3("axis1", spec.axis1);
        vec3("axis2", spec.axis2);
        vec3("position1", spec.position1);
        vec3("position2", spec.position2);
        m.nv.pairs.push_back(spec);
      }
    }
    m.nv.r_nm = r.number(n, "nv", "r_nm", m.nv.r_nm);
    m.nv.field_gauge = r.boolean(n, "nv", "field_gauge", m.nv.field_gauge);
    m.nv.wahuha_tau_factor = r.number(n, "nv", "wahuha_tau_factor", m.nv.wahuha_tau_factor);
    if (n.contains("yield_sizes")) {
      m.nv.yield_sizes.clear();
      for (double v : r.numbers(n, "nv", "yield_sizes")) {
        if (v != std::floor(v)) r.fail("nv.yield_sizes", "expected integers");
        m.nv.yield_sizes.push_back(static_cast<int>(v));
      }
    }
  }
  if (j.contains("verify")) parse_verify(r, j.at("verify"), "verify", m.verify);
  check_ranges(r, m);
  m.hash = fnv1a64(j.dump());
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot read manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

RunManifest default_manifest(ExperimentKind kind) {
  json j{{"schema_version", kSchemaVersion}, {"kind", kind_name(kind)}};
  switch (kind) {
    case ExperimentKind::Cool:
      j["name"] = "fig2a";
      j["config"] = {{"kt_over_omega", 10.0}, {"steps", 40}};
      j["grid"] = {{"probe_size", {2, 4, 6, 8, 10}}};
      break;
    case ExperimentKind::Thermometry:
      j["name"] = "fig3a";
      j["config"] = {{"kt_over_omega", 5.0}, {"steps", 30}};
      j["grid"] = {{"probe_size", {2, 4, 6, 8, 10}}};
      j["thermometry"] = {{"shots_per_site", 1000}};
      break;
    case ExperimentKind::Sweep:
      j["name"] = "fig4";
      j["config"] = {{"probe_size", 10}, {"kt_over_omega", 5.0}, {"steps", 40}};
      j["grid"] = {{"gamma", {0.0, 0.01, 0.05, 0.1, 0.5}}};
      break;
    case ExperimentKind::NvCoupling:
      j["name"] = "nv_coupling";
      break;
    case ExperimentKind::Verify:
      j["name"] = "verify";
      break;
  }
  return parse_manifest(j.dump(2));
}

}  // namespace spinfridge::runner
