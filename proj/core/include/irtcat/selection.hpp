#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "irtcat/item_bank.hpp"
#include "irtcat/random.hpp"

namespace irtcat {

enum class SelectionStrategy {
  MaxInformation,  // MFI
  Random,          // RS: uniform without replacement
};

std::string_view to_string(SelectionStrategy strategy) noexcept;

/// Accepts "mfi" / "rs" (case-insensitive). Throws ConfigError otherwise.
SelectionStrategy parse_strategy(std::string_view text);

/// Tracks which bank indices a session has already administered.
class ItemPool {
 public:
  explicit ItemPool(std::size_t bank_size) : used_(bank_size, false), remaining_(bank_size) {}

  bool used(std::size_t index) const { return used_[index]; }
  void mark(std::size_t index);
  std::size_t remaining() const noexcept { return remaining_; }
  std::size_t size() const noexcept { return used_.size(); }

 private:
  std::vector<bool> used_;
  std::size_t remaining_;
};

/// Exact MFI search that only evaluates items near theta_hat. Items are
/// split into discrimination bands, each ordered by difficulty; a band stops
/// being scanned once no remaining item in it can beat the best found.
/// Build once per bank and share across sessions.
class InformationIndex {
 public:
  explicit InformationIndex(const ItemBank& bank, std::size_t band_size = 64);

  /// Same result as the exhaustive scan (including the lowest-index tie rule).
  std::size_t best_item(const ItemBank& bank, const ItemPool& pool, double theta_hat) const;
  std::size_t size() const noexcept { return bank_size_; }

 private:
  struct Band {
    double min_a = 0.0;
    double max_a = 0.0;
    std::vector<std::size_t> items;  // ascending difficulty
    std::vector<double> difficulty;
  };
  std::vector<Band> bands_;  // descending max_a
  std::size_t bank_size_ = 0;
};

/// Uniform draw over the whole bank.
std::size_t first_item(const ItemBank& bank, RandomStream& rng);

/// Next item for a session. MFI returns the unused item with the largest
/// information at theta_hat, lowest bank index on ties. RS draws uniformly
/// among unused items and never reads theta_hat.
/// Throws Error when the pool is exhausted.
/// `index`, when given, must have been built from `bank`.
std::size_t select_next(const ItemBank& bank, const ItemPool& pool, double theta_hat,
                        SelectionStrategy strategy, RandomStream& rng, const InformationIndex* index = nullptr);

}  // namespace irtcat
