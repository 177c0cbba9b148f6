#include "irtcat/selection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "irtcat/error.hpp"
#include "irtcat/irt.hpp"

namespace irtcat {

std::string_view to_string(SelectionStrategy strategy) noexcept {
  switch (strategy) {
    case SelectionStrategy::MaxInformation:
      return "MFI";
    case SelectionStrategy::Random:
      return "RS";
  }
  return "MFI";
}

SelectionStrategy parse_strategy(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "mfi") return SelectionStrategy::MaxInformation;
  if (lower == "rs") return SelectionStrategy::Random;
  throw ConfigError("unknown selection strategy '" + std::string(text) + "' (expected mfi or rs)");
}

void ItemPool::mark(std::size_t index) {
  if (used_.at(index)) throw InternalError("item administered twice");
  used_[index] = true;
  --remaining_;
}

namespace {

// Smallest distance |theta - b| beyond which an item with a in [min_a, max_a]
// has information below `target`. Uses a^2 g(a d) <= max_a^2 g(min_a d), with
// g(z) = e / (1 + e)^2, e = exp(-z), decreasing in z; g(z) = t solves to
// e = 2t / ((1 - 2t) + sqrt(1 - 4t)).
double reach(double min_a, double max_a, double target) {
  const double t = target / (max_a * max_a);
  if (t >= 0.25) return 0.0;
  if (t <= 0.0) return std::numeric_limits<double>::infinity();
  const double e = 2.0 * t / ((1.0 - 2.0 * t) + std::sqrt(1.0 - 4.0 * t));
  return -std::log(e) / min_a;
}

}  // namespace

InformationIndex::InformationIndex(const ItemBank& bank, std::size_t band_size) : bank_size_(bank.size()) {
  if (band_size == 0) throw std::invalid_argument("band size must be positive");
  std::vector<std::size_t> by_a(bank.size());
  std::iota(by_a.begin(), by_a.end(), 0);
  std::stable_sort(by_a.begin(), by_a.end(),
                   [&](std::size_t x, std::size_t y) { return bank[x].discrimination > bank[y].discrimination; });
  for (std::size_t start = 0; start < by_a.size(); start += band_size) {
    Band band;
    band.items.assign(by_a.begin() + static_cast<std::ptrdiff_t>(start),
                      by_a.begin() + static_cast<std::ptrdiff_t>(std::min(start + band_size, by_a.size())));
    band.max_a = bank[band.items.front()].discrimination;
    band.min_a = bank[band.items.back()].discrimination;
    std::stable_sort(band.items.begin(), band.items.end(),
                     [&](std::size_t x, std::size_t y) { return bank[x].difficulty < bank[y].difficulty; });
    for (auto i : band.items) band.difficulty.push_back(bank[i].difficulty);
    bands_.push_back(std::move(band));
  }
}

std::size_t InformationIndex::best_item(const ItemBank& bank, const ItemPool& pool, double theta_hat) const {
  if (bank.size() != bank_size_) throw std::invalid_argument("information index was built for another bank");
  constexpr double kFar = std::numeric_limits<double>::infinity();
  // The slack keeps rounding in reach() from pruning an item that ties the best.
  constexpr double kSlack = 1.0 - 1e-9;
  std::size_t best = bank.size();
  double best_info = -1.0;
  for (const Band& band : bands_) {
    double cutoff = kFar;
    double cutoff_for = -1.0;
    const std::size_t n = band.items.size();
    auto right = static_cast<std::size_t>(std::lower_bound(band.difficulty.begin(), band.difficulty.end(), theta_hat) -
                                          band.difficulty.begin());
    auto left = right;  // items [0, left) remain on the left
    while (left > 0 || right < n) {
      const double dl = left > 0 ? theta_hat - band.difficulty[left - 1] : kFar;
      const double dr = right < n ? band.difficulty[right] - theta_hat : kFar;
      if (best_info != cutoff_for) {
        cutoff = best_info < 0.0 ? kFar : reach(band.min_a, band.max_a, best_info * kSlack);
        cutoff_for = best_info;
      }
      if (std::min(dl, dr) > cutoff) break;
      const std::size_t i = dl <= dr ? band.items[--left] : band.items[right++];
      if (pool.used(i)) continue;
      const double info = item_information(bank[i], theta_hat);
      if (info > best_info || (info == best_info && i < best)) {
        best_info = info;
        best = i;
      }
    }
  }
  return best;
}

std::size_t first_item(const ItemBank& bank, RandomStream& rng) { return rng.index(bank.size()); }

std::size_t select_next(const ItemBank& bank, const ItemPool& pool, double theta_hat,
                        SelectionStrategy strategy, RandomStream& rng, const InformationIndex* index) {
  if (pool.size() != bank.size()) throw std::invalid_argument("item pool does not match the bank");
  if (pool.remaining() == 0) throw Error("item pool exhausted");

  if (strategy == SelectionStrategy::Random) {
    std::size_t skip = rng.index(pool.remaining());
    for (std::size_t i = 0; i < bank.size(); ++i) {
      if (pool.used(i)) continue;
      if (skip-- == 0) return i;
    }
    throw InternalError("random selection ran past the pool");
  }

  if (index != nullptr) return index->best_item(bank, pool, theta_hat);
  std::size_t best = bank.size();
  double best_info = -1.0;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (pool.used(i)) continue;
    const double info = item_information(bank[i], theta_hat);
    if (info > best_info) {  // strict: earlier index wins ties
      best_info = info;
      best = i;
    }
  }
  return best;
}

}  // namespace irtcat
