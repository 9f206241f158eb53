#include "spinfridge/swap.hpp"

#include <cmath>
#include <numbers>

#include "spinfridge/errors.hpp"

namespace spinfridge {

SwapSpec SwapSpec::partial(double interaction_strength) {
  SwapSpec s;
  s.mode = SwapMode::Partial;
  s.interaction_strength = interaction_strength;
  return s;
}

double SwapSpec::duration() const {
  if (mode == SwapMode::Perfect) return 0.0;
  return std::numbers::pi / (4.0 * interaction_strength);
}

void SwapSpec::validate() const {
  if (mode == SwapMode::Partial && !(interaction_strength > 0.0 && std::isfinite(interaction_strength))) {
    throw DomainError("partial swap needs a positive interaction strength");
  }
  if (gamma && !(*gamma >= 0.0)) throw DomainError("swap dephasing rate must be >= 0");
  if (!std::isfinite(qubit_gap)) throw DomainError("qubit gap must be finite");
}

QuantumState perfect_swap(const QuantumState& state, int site_i, int site_j) {
  if (site_i == site_j) throw DomainError("swap sites must differ");
  return swap_sites(state, site_i, site_j);
}

LindbladGenerator partial_swap_generator(const SwapSpec& spec, const SpinNetwork& probe, double probe_gamma) {
  spec.validate();
  if (spec.mode != SwapMode::Partial) throw DomainError("partial_swap_generator needs a partial swap spec");
  const SpinRegister& preg = probe.reg();
  if (preg.contains(0) || !preg.contains(1)) throw DomainError("probe must contain site 1 and not site 0");
  const SpinRegister joint = SpinRegister({0}).concat(preg);
  SpinNetwork net = spec.background ? probe.embedded_in(joint) : SpinNetwork(joint);
  net.set_bond(0, 1, spec.interaction_strength, 1.0);
  if (spec.qubit_gap != 0.0) net.set_field(0, 0.5 * spec.qubit_gap);
  std::vector<int> dephased = preg.labels();
  if (spec.dephase_qubit) dephased.insert(dephased.begin(), 0);
  const double gamma = spec.gamma.value_or(probe_gamma);
  return LindbladGenerator(Hamiltonian::from_network(net), gamma, dephased);
}

QuantumState partial_swap(const QuantumState& joint, const SwapSpec& spec, const SpinNetwork& probe,
                          double probe_gamma, const IntegratorConfig& cfg) {
  LindbladGenerator gen = partial_swap_generator(spec, probe, probe_gamma);
  if (joint.reg() != gen.reg()) throw DomainError("joint state must be qubit (site 0) followed by the probe");
  return evolve(joint, gen, spec.duration(), cfg);
}

}  // namespace spinfridge
