#include "irtcat/item_bank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "irtcat/error.hpp"
#include "irtcat/random.hpp"
#include "csv.hpp"

namespace irtcat {

namespace {

constexpr const char* kHeader[] = {"id", "a", "b", "key", "stem", "options"};
constexpr std::size_t kColumns = 6;
constexpr std::string_view kOptionSeparator = ";;";

bool is_option_letter(char c) { return c >= 'A' && c <= 'E'; }

bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  try {
    return csv::read_record(in, fields, line);
  } catch (const csv::UnterminatedField& e) {
    throw BankError("unterminated quoted field", e.line);
  }
}

using csv::format_number;
using csv::quote_field;

double parse_number(const std::string& text, std::size_t row, const char* field) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto result = std::from_chars(first, last, value);
  if (text.empty() || result.ec != std::errc() || result.ptr != last || !std::isfinite(value)) {
    throw BankError("not a finite number: '" + text + "'", row, field);
  }
  return value;
}

std::vector<ItemOption> parse_options(const std::string& text, std::size_t row) {
  std::vector<ItemOption> options;
  if (text.empty()) return options;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(kOptionSeparator, start);
    const std::string pair = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (pair.size() < 2 || pair[1] != '|') {
      throw BankError("option '" + pair + "' is not of the form L|text", row, "options");
    }
    options.push_back({pair[0], pair.substr(2)});
    if (end == std::string::npos) break;
    start = end + kOptionSeparator.size();
  }
  return options;
}

std::string format_options(const std::vector<ItemOption>& options) {
  std::string out;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (i > 0) out += kOptionSeparator;
    out.push_back(options[i].letter);
    out.push_back('|');
    out += options[i].text;
  }
  return out;
}

ItemParameters parse_row(const std::vector<std::string>& fields, std::size_t row) {
  if (fields.size() != kColumns) {
    throw BankError(fmt::format("expected {} fields, found {}", kColumns, fields.size()), row);
  }
  ItemParameters item;
  item.id = fields[0];
  if (item.id.empty()) throw BankError("empty id", row, "id");
  item.discrimination = parse_number(fields[1], row, "a");
  item.difficulty = parse_number(fields[2], row, "b");
  if (!fields[3].empty()) {
    if (fields[3].size() != 1) throw BankError("key must be one letter", row, "key", item.id);
    item.answer_key = fields[3][0];
  }
  item.stem = fields[4];
  item.options = parse_options(fields[5], row);
  validate_item(item, row);
  return item;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void validate_distribution(const ParameterDistribution& d, const char* name, bool positive) {
  const auto bad = [&](const std::string& why) {
    throw ConfigError(fmt::format("{} distribution: {}", name, why));
  };
  if (!std::isfinite(d.mean) || !std::isfinite(d.sd) || !std::isfinite(d.min) || !std::isfinite(d.max)) {
    bad("all moments must be finite");
  }
  if (d.sd < 0.0) bad("sd must be non-negative");
  if (positive && d.min <= 0.0) bad("min must be positive");
  if (!(d.min <= d.max)) bad("require min <= max");
  if (d.sd == 0.0) {
    if (!(d.min <= d.mean && d.mean <= d.max)) bad("with sd = 0 the mean must lie in [min, max]");
    return;
  }
  // Resampling acceptance mass; a mean more than 6 sd outside the window is rejected.
  const double mass = normal_cdf((d.max - d.mean) / d.sd) - normal_cdf((d.min - d.mean) / d.sd);
  if (!(mass >= normal_cdf(-6.0))) bad("truncation window is infeasible for resampling");
}

double draw_truncated(const ParameterDistribution& d, RandomStream& rng) {
  if (d.sd == 0.0) return d.mean;
  for (;;) {
    const double x = d.mean + d.sd * rng.normal();
    if (x >= d.min && x <= d.max) return x;
  }
}

}  // namespace

void validate_item(const ItemParameters& item, std::optional<std::size_t> row) {
  if (item.id.empty()) throw BankError("empty id", row, "id");
  if (item.id.find_first_of(",\"\r\n") != std::string::npos) {
    throw BankError("id must not contain commas, quotes or newlines", row, "id", item.id);
  }
  if (!std::isfinite(item.discrimination) || item.discrimination <= 0.0) {
    throw BankError("discrimination must be positive", row, "a", item.id);
  }
  if (!std::isfinite(item.difficulty)) throw BankError("difficulty must be finite", row, "b", item.id);
  if (item.answer_key && !is_option_letter(*item.answer_key)) {
    throw BankError(fmt::format("answer key '{}' is not in A..E", *item.answer_key), row, "key", item.id);
  }
  if (item.options.empty()) return;
  if (item.options.size() > 5) throw BankError("at most five options (A..E)", row, "options", item.id);
  for (std::size_t i = 0; i < item.options.size(); ++i) {
    const char expected = static_cast<char>('A' + i);
    if (item.options[i].letter != expected) {
      throw BankError(fmt::format("option letters must run A, B, C... (found '{}' at position {})",
                                  item.options[i].letter, i + 1),
                      row, "options", item.id);
    }
    if (item.options[i].text.find(kOptionSeparator) != std::string::npos) {
      throw BankError("option text must not contain ';;'", row, "options", item.id);
    }
  }
  if (!item.answer_key) throw BankError("answer key required when options are present", row, "key", item.id);
  if (*item.answer_key >= static_cast<char>('A' + item.options.size())) {
    throw BankError(fmt::format("answer key '{}' is not one of the options", *item.answer_key), row, "key",
                    item.id);
  }
}

ItemBank::ItemBank(std::vector<ItemParameters> items, BankMetadata metadata)
    : items_(std::move(items)), metadata_(std::move(metadata)) {
  if (items_.empty()) throw BankError("item bank is empty");
  index_.reserve(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    validate_item(items_[i]);
    if (!index_.emplace(items_[i].id, i).second) {
      throw BankError("duplicate id", std::nullopt, "id", items_[i].id);
    }
  }
}

std::optional<std::size_t> ItemBank::find(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ItemBank parse_bank(std::istream& in, BankMetadata metadata) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!read_record(in, fields, line)) throw BankError("missing header row", 1);
  if (fields.size() != kColumns || !std::equal(fields.begin(), fields.end(), std::begin(kHeader))) {
    throw BankError("header must be 'id,a,b,key,stem,options'", 1);
  }
  std::vector<ItemParameters> items;
  std::unordered_map<std::string, std::size_t> seen;
  while (true) {
    const std::size_t row = line + 1;
    if (!read_record(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ItemParameters item = parse_row(fields, row);
    if (const auto [it, fresh] = seen.emplace(item.id, row); !fresh) {
      throw BankError(fmt::format("duplicate id (first seen on row {})", it->second), row, "id", item.id);
    }
    items.push_back(std::move(item));
  }
  if (items.empty()) throw BankError("item bank is empty");
  return ItemBank(std::move(items), std::move(metadata));
}

void write_bank(std::ostream& out, const ItemBank& bank) {
  out << "id,a,b,key,stem,options\n";
  for (const auto& item : bank.items()) {
    out << item.id << ',' << format_number(item.discrimination) << ',' << format_number(item.difficulty)
        << ',';
    if (item.answer_key) out << *item.answer_key;
    out << ',' << quote_field(item.stem) << ',' << quote_field(format_options(item.options)) << '\n';
  }
}

std::filesystem::path metadata_path(const std::filesystem::path& bank_path) {
  return bank_path.string() + ".meta.json";
}

ItemBank load_bank(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BankError("cannot open bank file " + path.string());
  BankMetadata metadata{path.stem().string(), path.string(), ""};
  const auto meta_path = metadata_path(path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta_in(meta_path);
    const auto meta = nlohmann::json::parse(meta_in, nullptr, false);
    if (meta.is_discarded() || !meta.is_object()) {
      throw BankError("metadata sidecar is not a JSON object: " + meta_path.string());
    }
    metadata.name = meta.value("name", metadata.name);
    metadata.source = meta.value("source", metadata.source);
    metadata.calibration_note = meta.value("calibration_note", std::string{});
  }
  return parse_bank(in, std::move(metadata));
}

void save_bank(const std::filesystem::path& path, const ItemBank& bank, const std::string& extra_metadata_json) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_bank(out, bank);
  }
  nlohmann::ordered_json meta;
  meta["name"] = bank.metadata().name;
  meta["source"] = bank.metadata().source;
  meta["calibration_note"] = bank.metadata().calibration_note;
  meta["n_items"] = bank.size();
  if (!extra_metadata_json.empty()) {
    const auto extra = nlohmann::ordered_json::parse(extra_metadata_json);
    for (const auto& [key, value] : extra.items()) meta[key] = value;
  }
  std::ofstream out(metadata_path(path), std::ios::binary);
  if (!out) throw Error("cannot write " + metadata_path(path).string());
  out << meta.dump(2) << '\n';
}

BankSpec reference_bank_spec(std::uint64_t seed) {
  BankSpec spec;
  spec.n_items = 2815;
  spec.alpha = {1.01, 0.08, 0.44, 1.52};
  spec.beta = {-0.01, 0.20, -1.11, 1.44};
  spec.seed = seed;
  spec.name = "synthetic-reference";
  return spec;
}

void validate_bank_spec(const BankSpec& spec) {
  if (spec.n_items == 0) throw ConfigError("n_items must be positive");
  validate_distribution(spec.alpha, "alpha", true);
  validate_distribution(spec.beta, "beta", false);
}

ItemBank generate_synthetic_bank(const BankSpec& spec) {
  validate_bank_spec(spec);
  // Separate streams so changing one distribution leaves the other's draws intact.
  RandomStream alpha_rng(derive_seed(spec.seed, 1));
  RandomStream beta_rng(derive_seed(spec.seed, 2));
  const int width = std::max<int>(4, static_cast<int>(std::to_string(spec.n_items).size()));
  std::vector<ItemParameters> items(spec.n_items);
  for (std::size_t i = 0; i < spec.n_items; ++i) {
    items[i].id = fmt::format("syn-{:0{}}", i + 1, width);
    items[i].discrimination = draw_truncated(spec.alpha, alpha_rng);
    items[i].difficulty = draw_truncated(spec.beta, beta_rng);
  }
  BankMetadata metadata{spec.name, "generated", fmt::format(
      "truncated-normal synthetic bank; alpha ~ N({}, {}) in [{}, {}]; beta ~ N({}, {}) in [{}, {}]; seed {}",
      spec.alpha.mean, spec.alpha.sd, spec.alpha.min, spec.alpha.max, spec.beta.mean, spec.beta.sd,
      spec.beta.min, spec.beta.max, spec.seed)};
  return ItemBank(std::move(items), std::move(metadata));
}

ItemBank with_placeholder_content(const ItemBank& bank, std::uint64_t seed) {
  RandomStream rng(derive_seed(seed, 3));
  std::vector<ItemParameters> items(bank.items().begin(), bank.items().end());
  for (auto& item : items) {
    item.stem = "Placeholder question for item " + item.id + ".";
    item.options.clear();
    for (char letter = 'A'; letter <= 'E'; ++letter) {
      item.options.push_back({letter, fmt::format("Option {} of {}", letter, item.id)});
    }
    item.answer_key = static_cast<char>('A' + rng.index(5));
  }
  return ItemBank(std::move(items), bank.metadata());
}

}  // namespace irtcat
