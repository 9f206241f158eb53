#include "spinfridge/sector_basis.hpp"

#include <bit>
#include <map>
#include <mutex>

#include "spinfridge/errors.hpp"

namespace spinfridge {

BasisLayout::BasisLayout(int num_sites, bool sectored) : num_sites_(num_sites), sectored_(sectored) {
  if (num_sites < 1 || num_sites > 24) throw DomainError("basis layout supports 1..24 sites");
  const std::uint32_t dim = std::uint32_t{1} << num_sites;
  offset_.resize(dim);
  if (sectored) {
    states_.resize(static_cast<std::size_t>(num_sites) + 1);
    for (int l = 0; l <= num_sites; ++l) states_[static_cast<std::size_t>(l)].reserve(binomial(num_sites, l));
    for (std::uint32_t s = 0; s < dim; ++s) {
      auto& block = states_[static_cast<std::size_t>(std::popcount(s))];
      offset_[s] = static_cast<std::uint32_t>(block.size());
      block.push_back(s);
    }
  } else {
    states_.resize(1);
    states_[0].resize(dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
      states_[0][s] = s;
      offset_[s] = s;
    }
  }
}

int BasisLayout::block_of(std::uint32_t index) const { return sectored_ ? std::popcount(index) : 0; }

namespace {
std::shared_ptr<const BasisLayout> cached(int num_sites, bool sectored,
                                          std::shared_ptr<const BasisLayout> (*make)(int)) {
  static std::mutex mutex;
  static std::map<std::pair<int, bool>, std::shared_ptr<const BasisLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{num_sites, sectored}];
  if (!slot) slot = make(num_sites);
  return slot;
}
}  // namespace

std::shared_ptr<const BasisLayout> BasisLayout::sectors(int num_sites) {
  return cached(num_sites, true, [](int n) {
    return std::shared_ptr<const BasisLayout>(new BasisLayout(n, true));
  });
}

std::shared_ptr<const BasisLayout> BasisLayout::full(int num_sites) {
  return cached(num_sites, false, [](int n) {
    return std::shared_ptr<const BasisLayout>(new BasisLayout(n, false));
  });
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

}  // namespace spinfridge
