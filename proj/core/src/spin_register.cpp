#include "spinfridge/spin_register.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spinfridge/errors.hpp"

namespace spinfridge {

SpinRegister::SpinRegister(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw DomainError("spin register must contain at least one site");
  if (labels_.size() > 30) throw DomainError("spin register larger than 30 sites is not supported");
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (labels_[i] <= labels_[i - 1]) {
      throw DomainError("spin register labels must be unique and strictly increasing");
    }
  }
}

SpinRegister SpinRegister::probe(int n) { return range(1, n); }

SpinRegister SpinRegister::range(int first, int n) {
  if (n < 1) throw DomainError("spin register must contain at least one site");
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), first);
  return SpinRegister(std::move(labels));
}

bool SpinRegister::contains(int label) const noexcept {
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

int SpinRegister::position(int label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    throw DomainError("site " + std::to_string(label) + " is not in the register");
  }
  return static_cast<int>(it - labels_.begin());
}

SpinRegister SpinRegister::concat(const SpinRegister& other) const {
  std::vector<int> joined = labels_;
  joined.insert(joined.end(), other.labels_.begin(), other.labels_.end());
  bool increasing = true;
  for (std::size_t i = 1; i < joined.size(); ++i) increasing = increasing && joined[i] > joined[i - 1];
  if (increasing) return SpinRegister(std::move(joined));
  return probe(static_cast<int>(joined.size()));
}

}  // namespace spinfridge
