#include "irtcat/summary.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "irtcat/digest.hpp"
#include "irtcat/error.hpp"

#ifndef IRTCAT_VERSION
#define IRTCAT_VERSION "0.0.0"
#endif

namespace irtcat {

namespace {

double parse_field(std::string text, std::size_t line, const char* field) {
  double scale = 1.0;
  if (!text.empty() && text.back() == '%') {
    text.pop_back();
    scale = 0.01;
  }
  double value = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(fmt::format("summary line {}: field '{}' is not a number: '{}'", line, field, text));
  }
  return value * scale;
}

double mean_of(const std::vector<PairedSummary>& pairs, double SummaryRow::*field, bool reference) {
  double total = 0.0;
  for (const auto& p : pairs) total += (reference ? p.reference : p.candidate).*field;
  return total / static_cast<double>(pairs.size());
}

Percent reduction(const std::vector<PairedSummary>& pairs, double SummaryRow::*field) {
  const double ref = mean_of(pairs, field, true);
  if (ref == 0.0) return std::nullopt;
  return (1.0 - mean_of(pairs, field, false) / ref) * 100.0;
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    long long value = 0;
    const auto r = std::from_chars(epoch, epoch + std::char_traits<char>::length(epoch), value);
    if (r.ec == std::errc() && *r.ptr == '\0') t = static_cast<std::time_t>(value);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json hashed_fields(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config"] = m.config_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(m.config_json);
  j["bank_digest"] = m.bank_digest;
  j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  j["version"] = m.version;
  return j;
}

}  // namespace

std::vector<SummaryRow> parse_summaries(std::istream& in) {
  std::vector<SummaryRow> rows;
  std::vector<std::string> fields;
  std::size_t line = 0;
  bool header_seen = false;
  for (;;) {
    bool more = false;
    try {
      more = csv::read_record(in, fields, line);
    } catch (const csv::UnterminatedField& e) {
      throw ConfigError(fmt::format("summary line {}: unterminated quoted field", e.line));
    }
    if (!more) break;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (!fields[0].empty() && fields[0][0] == '#') continue;
    if (!header_seen) {
      std::string joined;
      for (std::size_t i = 0; i < fields.size(); ++i) joined += (i ? "," : "") + fields[i];
      if (joined != kSummaryHeader) {
        throw ConfigError(fmt::format("summary header must be '{}', got '{}'", kSummaryHeader, joined));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 6) {
      throw ConfigError(fmt::format("summary line {}: expected 6 fields, got {}", line, fields.size()));
    }
    if (fields[0].empty()) throw ConfigError(fmt::format("summary line {}: empty model name", line));
    rows.push_back({fields[0], parse_field(fields[1], line, "theta"), parse_field(fields[2], line, "accuracy"),
                    parse_field(fields[3], line, "length"), parse_field(fields[4], line, "tokens"),
                    parse_field(fields[5], line, "time_s")});
  }
  if (!header_seen) throw ConfigError("summary file has no header");
  return rows;
}

std::vector<SummaryRow> load_summaries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open summary file " + path.string());
  return parse_summaries(in);
}

std::string format_summary_row(const SummaryRow& row) {
  return fmt::format("{},{:.4f},{:.4f},{},{},{:.3f}", csv::quote_field(row.model), row.theta, row.accuracy,
                     csv::format_number(row.length), csv::format_number(row.tokens), row.time_s);
}

SummaryComparison compare_summaries(const std::vector<SummaryRow>& reference,
                                    const std::vector<SummaryRow>& candidate) {
  std::unordered_map<std::string, const SummaryRow*> by_model;
  for (const auto& row : candidate) {
    if (!by_model.emplace(row.model, &row).second) {
      throw ConfigError("model '" + row.model + "' is listed twice in the candidate summaries");
    }
  }
  SummaryComparison out;
  std::unordered_map<std::string, bool> seen;
  for (const auto& row : reference) {
    if (!seen.emplace(row.model, true).second) {
      throw ConfigError("model '" + row.model + "' is listed twice in the reference summaries");
    }
    if (const auto it = by_model.find(row.model); it != by_model.end()) out.pairs.push_back({row, *it->second});
  }
  if (out.pairs.empty()) throw ConfigError("summary files share no models");

  std::vector<double> ref_theta;
  std::vector<double> cand_theta;
  std::vector<double> ref_acc;
  std::vector<double> cand_acc;
  for (const auto& p : out.pairs) {
    ref_theta.push_back(p.reference.theta);
    cand_theta.push_back(p.candidate.theta);
    ref_acc.push_back(p.reference.accuracy);
    cand_acc.push_back(p.candidate.accuracy);
  }
  out.pearson_theta = pearson({cand_theta, ref_theta});
  out.spearman_theta = spearman({cand_theta, ref_theta});
  out.leaderboard_rho = leaderboard_rank_correlation({cand_theta, ref_theta});
  try {
    out.pearson_accuracy = pearson({cand_acc, ref_acc});
  } catch (const MetricError&) {
    out.pearson_accuracy.reset();
  }
  out.length_reduction = reduction(out.pairs, &SummaryRow::length);
  out.token_reduction = reduction(out.pairs, &SummaryRow::tokens);
  out.time_reduction = reduction(out.pairs, &SummaryRow::time_s);
  return out;
}

std::string RunManifest::digest() const { return sha256_hex(hashed_fields(*this).dump()); }

std::string RunManifest::to_json() const {
  auto j = hashed_fields(*this);
  j["digest"] = digest();
  j["created_at"] = created_at;
  return j.dump();
}

RunManifest make_manifest(std::string command, std::string config_json, std::string bank_digest,
                          std::optional<std::uint64_t> seed) {
  return {std::move(command), std::move(config_json), std::move(bank_digest), seed, version(), utc_timestamp()};
}

const char* version() noexcept { return IRTCAT_VERSION; }

}  // namespace irtcat
