#include "spinfridge/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "spinfridge/channel_checks.hpp"
#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

struct TrialResult {
  bool ok = true;
  double margin = std::numeric_limits<double>::infinity();
  bool secondary = false;
  std::optional<Witness> witness;
};

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  // splitmix64 of (seed, trial)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

template <class Fn>
OracleVerdict run_trials(const std::string& name, int trials, int threads, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<TrialResult> results(static_cast<std::size_t>(std::max(trials, 0)));
  const int workers = std::clamp(threads, 1, std::max(trials, 1));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int t = w; t < trials; t += workers) results[static_cast<std::size_t>(t)] = fn(t);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  OracleVerdict v;
  v.name = name;
  v.trials = trials;
  v.worst_margin = std::numeric_limits<double>::infinity();
  for (auto& r : results) {
    v.worst_margin = std::min(v.worst_margin, r.margin);
    v.secondary = v.secondary || r.secondary;
    if (!r.ok && v.pass) {
      v.pass = false;
      v.witness = std::move(r.witness);
    }
  }
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<int> probe_labels(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), 1);
  return labels;
}

double signed_beta_of(const QuantumState& qubit) {
  const double p0 = std::max(qubit.element(0, 0).real(), 0.0);
  const double p1 = std::max(qubit.element(1, 1).real(), 0.0);
  if (p0 == 0.0) return kInfiniteBeta;
  if (p1 == 0.0) return -kInfiniteBeta;
  return std::log(p1 / p0);
}

}  // namespace

SpinNetwork random_xxz_network(int n, double j, std::mt19937_64& rng) {
  SpinNetwork net(SpinRegister::probe(n));
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const double jab = uniform(rng, -j, j);
      const double delta = uniform(rng, 0.0, 2.0);
      net.set_bond(a, b, jab, delta);
    }
  }
  return net;
}

OracleVerdict oracle_always_cools(const AlwaysCoolsOptions& opt) {
  if (opt.max_sites < 1 || opt.max_sites > 6) throw DomainError("always-cools oracle supports 1..6 sites");
  return run_trials("always_cools", opt.trials, opt.threads, [&](int trial) {
    TrialResult r;
    const std::uint64_t seed = trial_seed(opt.seed, trial);
    std::mt19937_64 rng(seed);
    const int n = std::uniform_int_distribution<int>(1, opt.max_sites)(rng);
    double gamma = uniform(rng, 0.0, opt.gamma_max);
    if (trial == 0) gamma = 0.0;
    if (trial == 1) gamma = opt.gamma_max;
    const double bath = uniform(rng, 0.05, 2.0);
    std::vector<double> betas(static_cast<std::size_t>(n));
    for (auto& b : betas) {
      b = uniform(rng, 0.0, 1.0) < 0.2 ? kInfiniteBeta : bath + std::exponential_distribution<double>(0.5)(rng);
    }
    int hot_site = 0;
    if (opt.inject_hot_site) {
      hot_site = std::uniform_int_distribution<int>(1, n)(rng);
      betas[static_cast<std::size_t>(hot_site - 1)] = 0.5 * bath;
    }
    const SpinNetwork net = random_xxz_network(n, 1.0, rng);
    SwapSpec swap = SwapSpec::perfect();
    if (uniform(rng, 0.0, 1.0) < opt.partial_fraction) {
      swap = SwapSpec::partial(std::exp(uniform(rng, std::log(opt.interaction_min), std::log(opt.interaction_max))));
      swap.dephase_qubit = uniform(rng, 0.0, 1.0) < 0.5;
    }
    const LindbladGenerator gen(Hamiltonian::from_network(net), gamma);

    std::vector<double> taus(static_cast<std::size_t>(opt.steps_per_trial));
    for (auto& t : taus) t = uniform(rng, 0.0, static_cast<double>(n));

    auto witness = [&](const std::string& what, int step) {
      Witness w;
      w.description = what;
      w.trial = trial;
      w.trial_seed = seed;
      w.values = {{"N", n}, {"gamma", gamma}, {"bath_beta", bath}, {"J_I", swap.interaction_strength},
                  {"partial", swap.mode == SwapMode::Partial ? 1.0 : 0.0}, {"step", step}};
      for (int i = 0; i < n; ++i) w.values.emplace_back("probe_beta_" + std::to_string(i + 1), betas[static_cast<std::size_t>(i)]);
      if (opt.inject_hot_site) w.values.emplace_back("hot_site", hot_site);
      return w;
    };

    if (opt.check_channels) {
      const SpinRegister preg = SpinRegister::probe(n);
      const double tau0 = taus.empty() ? 1.0 : taus[0];
      Channel wait = [&](const QuantumState& s) { return evolve(s, gen, tau0, opt.integrator); };
      const auto unital = is_unital(wait, preg);
      const auto zcons = conserves_z_excitation(wait, preg, 2, seed);
      bool swap_ok = true;
      if (swap.mode == SwapMode::Partial) {
        const LindbladGenerator sg = partial_swap_generator(swap, net, gamma);
        Channel window = [&](const QuantumState& s) { return evolve(s, sg, swap.duration(), opt.integrator); };
        swap_ok = is_unital(window, sg.reg()).pass && conserves_z_excitation(window, sg.reg(), 2, seed).pass;
      }
      if (!unital.pass || !zcons.pass || !swap_ok) {
        r.ok = false;
        r.witness = witness("sampled channel is not unital and excitation conserving", 0);
        return r;
      }
    }

    std::vector<QuantumState> factors;
    for (int i = 0; i < n; ++i) factors.push_back(thermal_qubit(betas[static_cast<std::size_t>(i)], i + 1));
    QuantumState probe = product_state(factors);
    for (int step = 0; step < opt.steps_per_trial; ++step) {
      StepOutcome out = cool_step(probe, bath, gen, swap, net, taus[static_cast<std::size_t>(step)], 1.0, opt.integrator);
      const double margin = signed_beta_of(out.qubit_out) - bath;
      r.margin = std::min(r.margin, margin);
      if (margin < -1e-9 && r.ok) {
        r.ok = false;
        Witness w = witness("emitted qubit hotter than the bath", step + 1);
        w.values.emplace_back("beta_out", signed_beta_of(out.qubit_out));
        w.values.emplace_back("tau", taus[static_cast<std::size_t>(step)]);
        r.witness = std::move(w);
      }
      probe = std::move(out.probe);
    }
    return r;
  });
}

OracleVerdict oracle_stationary_state(const StationaryOptions& opt) {
  if (opt.max_sites < 1 || opt.max_sites > 8) throw DomainError("stationary-state oracle supports 1..8 sites");
  // one trial per (N, gamma, swap kind)
  struct Case {
    int n;
    double gamma;
    bool partial;
  };
  std::vector<Case> cases;
  for (int n = 1; n <= opt.max_sites; ++n) {
    for (double g : opt.gammas) {
      cases.push_back({n, g, false});
      cases.push_back({n, g, true});
    }
  }
  return run_trials("stationary_state", static_cast<int>(cases.size()), opt.threads, [&](int trial) {
    TrialResult r;
    const Case& c = cases[static_cast<std::size_t>(trial)];
    const std::uint64_t seed = trial_seed(opt.seed, trial);
    std::mt19937_64 rng(seed);
    SpinNetwork net(SpinRegister::probe(c.n));
    for (int a = 1; a < c.n; ++a) net.set_bond(a, a + 1, 1.0, opt.anisotropy);
    const LindbladGenerator gen(Hamiltonian::from_network(net), c.gamma);
    SwapSpec swap = c.partial ? SwapSpec::partial(opt.interaction_strength) : SwapSpec::perfect();
    if (c.partial) swap.dephase_qubit = true;

    const QuantumState probe = thermal_product(opt.bath_beta, c.n);
    const QuantumState joint_chi = thermal_product(opt.bath_beta, c.n + 1, 0);
    const QuantumState perturbed = thermal_product(opt.perturbed_factor * opt.bath_beta, c.n);
    double worst = 0.0;
    double displaced = 0.0;
    for (int s = 0; s < opt.tau_samples; ++s) {
      const double tau = uniform(rng, 0.0, static_cast<double>(c.n) + 1.0);
      const QuantumState waited = evolve(probe, gen, tau, opt.integrator);
      QuantumState joint = product_state({thermal_qubit(opt.bath_beta, 0), waited});
      joint = c.partial ? partial_swap(joint, swap, net, c.gamma, opt.integrator) : perfect_swap(joint, 0, 1);
      const double d = trace_distance(joint, joint_chi);
      if (d > worst) worst = d;
      if (d > opt.tol && r.ok) {
        r.ok = false;
        Witness w;
        w.description = "pseudo-thermal state moved by one protocol step";
        w.trial = trial;
        w.trial_seed = seed;
        w.values = {{"N", c.n}, {"gamma", c.gamma}, {"partial", c.partial ? 1.0 : 0.0}, {"tau", tau}, {"distance", d}};
        r.witness = std::move(w);
      }
      const StepOutcome moved = cool_step(perturbed, opt.bath_beta, gen, swap, net, tau, 1.0, opt.integrator);
      displaced = std::max(displaced, trace_distance(moved.probe, perturbed));
    }
    r.margin = opt.tol - worst;
    r.secondary = displaced > opt.displacement;
    if (!r.secondary && r.ok) {
      r.ok = false;
      Witness w;
      w.description = "perturbed product state was not displaced";
      w.trial = trial;
      w.trial_seed = seed;
      w.values = {{"N", c.n}, {"gamma", c.gamma}, {"partial", c.partial ? 1.0 : 0.0}, {"displacement", displaced}};
      r.witness = std::move(w);
    }
    return r;
  });
}

OracleVerdict oracle_entropy_bounds(std::span<const ProtocolReport> reports, double tol) {
  const auto start = std::chrono::steady_clock::now();
  OracleVerdict v;
  v.name = "entropy_bounds";
  v.trials = static_cast<int>(reports.size());
  v.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ProtocolReport& rep = reports[i];
    const EntropyAudit audit = entropy_accounting(rep, tol);
    for (const auto& row : audit.rows) {
      v.worst_margin = std::min({v.worst_margin, row.delta_S_qubit, row.delta_S_probe - row.delta_S_qubit,
                                 row.probe_gain - row.delta_S_qubit_total, audit.bound - row.probe_gain});
    }
    std::string failure = audit.pass ? "" : audit.message;
    int step = audit.first_violation;
    if (failure.empty() && rep.initial_probe_entropy <= 1e-12) {
      double prev = rep.initial_probe_entropy;
      for (const auto& s : rep.steps) {
        if (s.probe_entropy < prev - tol || s.probe_entropy > audit.bound + tol) {
          std::ostringstream os;
          os << "step " << s.k << ": probe entropy " << s.probe_entropy << " not monotone below N S_T";
          failure = os.str();
          step = s.k;
          break;
        }
        prev = s.probe_entropy;
      }
    }
    if (!failure.empty() && v.pass) {
      v.pass = false;
      Witness w;
      w.description = failure;
      w.trial = static_cast<int>(i);
      w.values = {{"N", rep.config.probe_size}, {"gamma", rep.config.gamma}, {"bath_beta", rep.config.bath_beta},
                  {"steps", rep.config.steps}, {"step", step}};
      v.witness = std::move(w);
    }
  }
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

bool majorizes(const RealVector& a, const RealVector& b, double tol, bool* strict) {
  if (a.size() != b.size()) throw DomainError("majorization needs vectors of equal length");
  std::vector<double> x(a.data(), a.data() + a.size());
  std::vector<double> y(b.data(), b.data() + b.size());
  std::sort(x.rbegin(), x.rend());
  std::sort(y.rbegin(), y.rend());
  double sx = 0.0;
  double sy = 0.0;
  bool ok = true;
  bool strictly = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    if (sx < sy - tol) ok = false;
    if (i + 1 < x.size() && sx > sy + tol) strictly = true;
  }
  if (std::abs(sx - sy) > tol) ok = false;
  if (strict) *strict = strictly;
  return ok;
}

OracleVerdict oracle_majorization(const MajorizationOptions& opt) {
  if (opt.max_sites < 1 || opt.max_sites > 6) throw DomainError("majorization oracle supports 1..6 sites");
  return run_trials("majorization", opt.trials, opt.threads, [&](int trial) {
    TrialResult r;
    const std::uint64_t seed = trial_seed(opt.seed, trial);
    std::mt19937_64 rng(seed);
    const int n = std::uniform_int_distribution<int>(1, opt.max_sites)(rng);
    const double gamma = uniform(rng, opt.gamma_min, opt.gamma_max);
    const double tau = uniform(rng, 0.0, opt.tau_max);
    const SpinRegister reg = SpinRegister::probe(n);
    const QuantumState input = random_state(reg, rng, Representation::SectorBlocked);
    const SpinNetwork net = random_xxz_network(n, 1.0, rng);
    QuantumState output = input;
    if (opt.reset_channel) {
      std::vector<QuantumState> parts{basis_state(SpinRegister({1}), 1)};
      if (n > 1) {
        std::vector<int> rest = probe_labels(n);
        rest.erase(rest.begin());
        parts.push_back(partial_trace(input, rest));
      }
      output = product_state(parts);
    } else {
      output = evolve(input, LindbladGenerator(Hamiltonian::from_network(net), gamma), tau, opt.integrator);
    }
    const auto before = block_spectra(input);
    const auto after = block_spectra(output);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < before.size(); ++l) {
      bool strict = false;
      const bool ok = majorizes(before[l], after[l], opt.tol, &strict);
      r.secondary = r.secondary || strict;
      // margin: smallest prefix slack
      std::vector<double> x(before[l].data(), before[l].data() + before[l].size());
      std::vector<double> y(after[l].data(), after[l].data() + after[l].size());
      std::sort(x.rbegin(), x.rend());
      std::sort(y.rbegin(), y.rend());
      double sx = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        worst = std::min(worst, sx - sy);
      }
      if (!ok && r.ok) {
        r.ok = false;
        Witness w;
        w.description = "sector spectrum not majorized by its input";
        w.trial = trial;
        w.trial_seed = seed;
        w.values = {{"N", n}, {"gamma", gamma}, {"tau", tau}, {"sector", static_cast<double>(l)}};
        r.witness = std::move(w);
      }
    }
    r.margin = worst;
    return r;
  });
}

}  // namespace spinfridge
