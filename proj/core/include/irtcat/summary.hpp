#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irtcat/metrics.hpp"

namespace irtcat {

/// One respondent's outcome: `model,theta,accuracy,length,tokens,time_s`.
/// Accuracy is a fraction; files may also write it as a percentage ("61.06%").
struct SummaryRow {
  std::string model;
  double theta = 0.0;
  double accuracy = 0.0;
  double length = 0.0;
  double tokens = 0.0;
  double time_s = 0.0;
};

std::vector<SummaryRow> parse_summaries(std::istream& in);
std::vector<SummaryRow> load_summaries(const std::filesystem::path& path);

inline constexpr const char* kSummaryHeader = "model,theta,accuracy,length,tokens,time_s";
std::string format_summary_row(const SummaryRow& row);

struct PairedSummary {
  SummaryRow reference;
  SummaryRow candidate;
};

struct SummaryComparison {
  std::vector<PairedSummary> pairs;  // in reference order
  double pearson_theta = 0.0;
  double spearman_theta = 0.0;   // average ranks
  double leaderboard_rho = 0.0;  // ordinal leaderboard positions
  std::optional<double> pearson_accuracy;
  Percent length_reduction;  // (1 - mean(candidate) / mean(reference)) * 100
  Percent token_reduction;
  Percent time_reduction;
};

/// Pairs rows by model name. Throws ConfigError when no model appears in
/// both, or when a model is listed twice in one file.
SummaryComparison compare_summaries(const std::vector<SummaryRow>& reference,
                                    const std::vector<SummaryRow>& candidate);

/// Reproducibility envelope attached to every artifact. The digest covers
/// the config, bank digest, seed and version; timestamps are recorded
/// alongside but left out so reruns hash identically.
struct RunManifest {
  std::string command;
  std::string config_json;  // canonical JSON object of the effective settings
  std::string bank_digest;
  std::optional<std::uint64_t> seed;
  std::string version;
  std::string created_at;  // UTC ISO-8601; SOURCE_DATE_EPOCH when set

  std::string digest() const;
  std::string to_json() const;
};

RunManifest make_manifest(std::string command, std::string config_json, std::string bank_digest,
                          std::optional<std::uint64_t> seed);

/// Library version string.
const char* version() noexcept;

}  // namespace irtcat
