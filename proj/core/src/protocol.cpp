#include "spinfridge/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

constexpr double kTieTol = 1e-12;

StepOutcome split_after_swap(const QuantumState& joint, int n) {
  std::vector<int> probe_sites(static_cast<std::size_t>(n));
  std::iota(probe_sites.begin(), probe_sites.end(), 1);
  return {partial_trace(joint, probe_sites), partial_trace(joint, {0})};
}

double signed_beta(const std::array<double, 2>& pops) {
  const double p0 = std::max(pops[0], 0.0);
  const double p1 = std::max(pops[1], 0.0);
  if (p0 == 0.0) return p1 > 0.0 ? kInfiniteBeta : 0.0;
  if (p1 == 0.0) return -kInfiniteBeta;
  return std::log(p1 / p0);
}

}  // namespace

void ProtocolConfig::validate() const {
  if (probe_size < 1 || probe_size > 20) throw DomainError("probe size must be in 1..20");
  if (!std::isfinite(coupling) || coupling == 0.0) throw DomainError("coupling J must be finite and nonzero");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("dephasing rate must be finite and >= 0");
  if (std::isnan(bath_beta) || bath_beta < 0.0) throw DomainError("bath inverse temperature must be >= 0");
  if (steps < 0) throw DomainError("step count must be >= 0");
  if (!(fixed_tau >= 0.0)) throw DomainError("fixed waiting time must be >= 0");
  swap.validate();
  integrator.validate();
  if (!probe_betas.empty() && static_cast<int>(probe_betas.size()) != probe_size) {
    throw DomainError("probe_betas must list one inverse temperature per probe site");
  }
  for (double b : probe_betas) {
    if (std::isnan(b) || b < 0.0) throw DomainError("probe inverse temperatures must be >= 0");
    if (enforce_cooler_probe && b < bath_beta) {
      std::ostringstream os;
      os << "probe site hotter than the bath (beta " << b << " < " << bath_beta << ")";
      throw DomainError(os.str());
    }
  }
  const SpinRegister expected = SpinRegister::probe(probe_size);
  if (network && network->reg() != expected) throw DomainError("network register must be sites 1..N");
  if (initial_probe) {
    if (initial_probe->reg() != expected) throw DomainError("initial probe register must be sites 1..N");
    initial_probe->validate();
  }
}

double ProtocolConfig::time_unit() const { return std::abs(coupling); }

double ProtocolConfig::search_range() const { return tau_max < 0.0 ? static_cast<double>(probe_size) : tau_max; }

SpinNetwork ProtocolConfig::probe_network() const {
  return network ? *network : SpinNetwork::uniform_chain(probe_size, coupling);
}

QuantumState ProtocolConfig::initial_state() const {
  if (initial_probe) return *initial_probe;
  std::vector<QuantumState> factors;
  for (int n = 1; n <= probe_size; ++n) {
    const double b = probe_betas.empty() ? kInfiniteBeta : probe_betas[static_cast<std::size_t>(n - 1)];
    factors.push_back(thermal_qubit(b, n));
  }
  return product_state(factors);
}

WaitingTime optimize_waiting_time(const QuantumState& probe, const LindbladGenerator& gen, double time_unit,
                                  double tau_max, const IntegratorConfig& cfg) {
  if (!(time_unit > 0.0)) throw DomainError("time unit must be positive");
  if (!(tau_max >= 0.0)) throw DomainError("search range must be >= 0");
  const double spacing = cfg.dense_output_spacing;
  const int count = static_cast<int>(std::floor(tau_max / spacing + 1e-9)) + 1;
  const LindbladGenerator ideal = gen.closed();
  const std::vector<double> p1 = site_population_profile(probe, ideal, 1, spacing / time_unit, count, cfg);
  const double best = *std::max_element(p1.begin(), p1.end());
  int idx = 0;
  while (p1[static_cast<std::size_t>(idx)] < best - kTieTol) ++idx;
  const double g = std::clamp(p1[static_cast<std::size_t>(idx)], 0.0, 1.0);
  WaitingTime w;
  w.tau = idx * spacing;
  w.grid_index = idx;
  w.ground_population = g;
  const double p0 = 1.0 - g;
  if (g < p0 - kInversionTol) throw StateError("population inversion");
  w.predicted = p0 <= 0.0 ? TemperatureRecord{kInfiniteBeta, kInfiniteBeta}
                          : TemperatureRecord{std::log(std::max(g / p0, 1.0)), std::max(g / p0, 1.0)};
  return w;
}

StepOutcome cool_step(const QuantumState& probe, double bath_beta, const LindbladGenerator& gen, const SwapSpec& swap,
                      const SpinNetwork& probe_network, double tau, double time_unit, const IntegratorConfig& cfg) {
  if (!(tau >= 0.0)) throw DomainError("waiting time must be >= 0");
  const QuantumState waited = evolve(probe, gen, tau / time_unit, cfg);
  const int n = probe.num_sites();
  if (swap.mode == SwapMode::Perfect) {
    QuantumState qubit_out = partial_trace(waited, {1});
    if (n == 1) return {thermal_qubit(bath_beta, 1), std::move(qubit_out)};
    std::vector<int> rest(static_cast<std::size_t>(n - 1));
    std::iota(rest.begin(), rest.end(), 2);
    return {product_state({thermal_qubit(bath_beta, 1), partial_trace(waited, rest)}), std::move(qubit_out)};
  }
  const QuantumState joint = product_state({thermal_qubit(bath_beta, 0), waited});
  return split_after_swap(partial_swap(joint, swap, probe_network, gen.gamma(), cfg), n);
}

CoolingEngine::CoolingEngine(ProtocolConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      net_(cfg_.probe_network()),
      gen_(Hamiltonian::from_network(net_), cfg_.gamma),
      ideal_(gen_.closed()),
      pseudo_thermal_(thermal_product(cfg_.bath_beta, cfg_.probe_size)),
      bath_entropy_(thermal_entropy(cfg_.bath_beta)) {
  if (cfg_.swap.mode == SwapMode::Partial) swap_gen_ = partial_swap_generator(cfg_.swap, net_, cfg_.gamma);
}

bool CoolingEngine::is_ideal() const noexcept { return gen_.is_closed() && cfg_.swap.mode == SwapMode::Perfect; }

WaitingTime CoolingEngine::optimize(const QuantumState& probe) const {
  return optimize_waiting_time(probe, ideal_, cfg_.time_unit(), cfg_.search_range(), cfg_.integrator);
}

StepOutcome CoolingEngine::apply(const QuantumState& probe, double tau, const LindbladGenerator& gen,
                                 const SwapSpec& swap, const std::optional<LindbladGenerator>& swap_gen) const {
  if (swap.mode == SwapMode::Perfect || !swap_gen) {
    return cool_step(probe, cfg_.bath_beta, gen, swap, net_, tau, cfg_.time_unit(), cfg_.integrator);
  }
  const QuantumState waited = evolve(probe, gen, tau / cfg_.time_unit(), cfg_.integrator);
  const QuantumState joint = product_state({thermal_qubit(cfg_.bath_beta, 0), waited});
  return split_after_swap(evolve(joint, *swap_gen, swap.duration(), cfg_.integrator), probe.num_sites());
}

StepOutcome CoolingEngine::step(const QuantumState& probe, double tau) const {
  return apply(probe, tau, gen_, cfg_.swap, swap_gen_);
}

StepOutcome CoolingEngine::ideal_step(const QuantumState& probe, double tau) const {
  return apply(probe, tau, ideal_, SwapSpec::perfect(), std::nullopt);
}

StepRecord CoolingEngine::record(int k, double tau, const StepOutcome& out) const {
  StepRecord r;
  r.k = k;
  r.tau = tau;
  r.qubit_populations = {out.qubit_out.element(0, 0).real(), out.qubit_out.element(1, 1).real()};
  r.beta_out = signed_beta(r.qubit_populations);
  try {
    r.qubit_out = temperature_of(out.qubit_out, cfg_.coherence_tol);
    r.beta_out = r.qubit_out->beta_tilde;
  } catch (const StateError&) {
    if (cfg_.enforce_cooler_probe) throw;
  }
  r.eta = cooling_efficiency(cfg_.bath_beta, r.beta_out);
  r.qubit_entropy = von_neumann_entropy(out.qubit_out);
  r.delta_S_qubit = bath_entropy_ - r.qubit_entropy;
  r.probe_entropy = von_neumann_entropy(out.probe);
  r.distance_to_pseudothermal = trace_distance(out.probe, pseudo_thermal_);
  return r;
}

ProtocolReport CoolingEngine::run() const {
  QuantumState probe = cfg_.initial_state();
  std::optional<QuantumState> shadow;
  if (cfg_.policy == WaitingPolicy::Optimized && cfg_.optimize_on == OptimizationTarget::IdealShadow && !is_ideal()) {
    shadow = probe;
  }
  std::vector<StepRecord> records;
  std::vector<double> totals;
  std::vector<QuantumState> history;
  if (cfg_.record_probe_states) history.push_back(probe);
  const double s0 = von_neumann_entropy(probe);
  const double d0 = trace_distance(probe, pseudo_thermal_);
  double total = 0.0;
  for (int k = 1; k <= cfg_.steps; ++k) {
    double tau = cfg_.fixed_tau;
    if (cfg_.policy == WaitingPolicy::Optimized) tau = optimize(shadow ? *shadow : probe).tau;
    StepOutcome out = step(probe, tau);
    if (shadow) shadow = ideal_step(*shadow, tau).probe;
    records.push_back(record(k, tau, out));
    total += records.back().delta_S_qubit;
    totals.push_back(total);
    probe = std::move(out.probe);
    if (cfg_.record_probe_states) history.push_back(probe);
  }
  return ProtocolReport{cfg_, bath_entropy_, s0, d0, std::move(records), std::move(totals), std::move(probe),
                        std::move(history)};
}

ProtocolReport run_protocol(const ProtocolConfig& cfg) { return CoolingEngine(cfg).run(); }

EntropyAudit entropy_accounting(const ProtocolReport& report, double tol) {
  EntropyAudit audit;
  const int n = report.config.probe_size;
  audit.bound = n * report.bath_entropy;
  double prev = report.initial_probe_entropy;
  double total = 0.0;
  auto fail = [&](int k, const std::string& what) {
    if (audit.pass) {
      audit.pass = false;
      audit.first_violation = k;
      audit.message = what;
    }
  };
  for (const StepRecord& s : report.steps) {
    EntropyAuditRow row;
    row.k = s.k;
    row.delta_S_probe = s.probe_entropy - prev;
    row.delta_S_qubit = s.delta_S_qubit;
    total += s.delta_S_qubit;
    row.delta_S_qubit_total = total;
    row.probe_gain = s.probe_entropy - report.initial_probe_entropy;
    std::ostringstream os;
    os << "step " << s.k << ": ";
    if (row.delta_S_qubit < -tol) {
      row.ok = false;
      os << "qubit entropy increased (dS_Q = " << row.delta_S_qubit << ")";
    } else if (row.delta_S_probe < row.delta_S_qubit - tol) {
      row.ok = false;
      os << "probe entropy gain " << row.delta_S_probe << " below qubit entropy loss " << row.delta_S_qubit;
    } else if (row.delta_S_qubit_total > row.probe_gain + tol) {
      row.ok = false;
      os << "cumulative qubit entropy loss " << row.delta_S_qubit_total << " exceeds probe gain " << row.probe_gain;
    } else if (row.probe_gain > audit.bound + tol) {
      row.ok = false;
      os << "probe entropy gain " << row.probe_gain << " exceeds N S_T = " << audit.bound;
    }
    if (!row.ok) fail(s.k, os.str());
    audit.rows.push_back(row);
    prev = s.probe_entropy;
  }
  return audit;
}

}  // namespace spinfridge
