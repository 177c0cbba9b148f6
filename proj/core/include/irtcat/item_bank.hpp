#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace irtcat {

struct ItemOption {
  char letter = 'A';
  std::string text;

  friend bool operator==(const ItemOption&, const ItemOption&) = default;
};

/// One calibrated 2PL item. Content (stem, options, key) is optional:
/// simulation-only banks carry parameters alone.
struct ItemParameters {
  std::string id;
  double discrimination = 1.0;  // logistic slope, > 0
  double difficulty = 0.0;      // location on the theta scale
  std::optional<char> answer_key;
  std::string stem;
  std::vector<ItemOption> options;

  bool has_content() const noexcept { return !stem.empty() && !options.empty(); }

  friend bool operator==(const ItemParameters&, const ItemParameters&) = default;
};

/// Throws BankError if the item breaks any invariant. `row` is reported in
/// the error when the item came from a file.
void validate_item(const ItemParameters& item, std::optional<std::size_t> row = std::nullopt);

struct BankMetadata {
  std::string name;
  std::string source;
  std::string calibration_note;

  friend bool operator==(const BankMetadata&, const BankMetadata&) = default;
};

/// Immutable, validated collection of items sharing one theta scale.
class ItemBank {
 public:
  ItemBank(std::vector<ItemParameters> items, BankMetadata metadata = {});

  std::span<const ItemParameters> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  const ItemParameters& operator[](std::size_t index) const { return items_[index]; }
  const BankMetadata& metadata() const noexcept { return metadata_; }

  std::optional<std::size_t> find(const std::string& id) const;

  friend bool operator==(const ItemBank& a, const ItemBank& b) {
    return a.items_ == b.items_ && a.metadata_ == b.metadata_;
  }

 private:
  std::vector<ItemParameters> items_;
  BankMetadata metadata_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Parse the tabular bank format (header `id,a,b,key,stem,options`).
ItemBank parse_bank(std::istream& in, BankMetadata metadata = {});

/// Serialize a bank in the tabular format. Numbers use the shortest
/// round-trip representation so parse_bank(write_bank(b)) == b.
void write_bank(std::ostream& out, const ItemBank& bank);

/// Sidecar path holding the bank metadata: `<bank>.meta.json`.
std::filesystem::path metadata_path(const std::filesystem::path& bank_path);

/// Load a bank file plus its metadata sidecar (if present).
ItemBank load_bank(const std::filesystem::path& path);

/// Write a bank file and its metadata sidecar. `extra_metadata_json`, when
/// non-empty, must be a JSON object merged into the sidecar (e.g. a run manifest).
void save_bank(const std::filesystem::path& path, const ItemBank& bank,
               const std::string& extra_metadata_json = {});

/// Moments and truncation window of one item parameter.
struct ParameterDistribution {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct BankSpec {
  std::size_t n_items = 0;
  ParameterDistribution alpha;
  ParameterDistribution beta;
  std::uint64_t seed = 0;
  std::string name = "synthetic";
};

/// Item-parameter profile of the calibrated bank used in the reference study:
/// 2,815 items, alpha M=1.01 SD=0.08 in [0.44, 1.52], beta M=-0.01 SD=0.20 in [-1.11, 1.44].
BankSpec reference_bank_spec(std::uint64_t seed);

/// Throws ConfigError when the spec is inconsistent or its truncation window
/// is infeasible for resampling.
void validate_bank_spec(const BankSpec& spec);

/// Draw a synthetic bank: normal parameters truncated to [min, max] by
/// resampling. Pure function of the spec, seed included.
ItemBank generate_synthetic_bank(const BankSpec& spec);

/// Give every item a placeholder stem, five options A..E, and a seeded
/// answer key, so content-requiring respondents can be dry-run.
ItemBank with_placeholder_content(const ItemBank& bank, std::uint64_t seed);

}  // namespace irtcat
