#include "irtcat/session_log.hpp"

#include <nlohmann/json.hpp>

#include "irtcat/digest.hpp"
#include "irtcat/error.hpp"

namespace irtcat {

namespace {

using Json = nlohmann::ordered_json;

}  // namespace

SessionLogWriter::SessionLogWriter(const std::filesystem::path& path, const std::string& manifest_json)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error("cannot write session log " + path.string());
  Json header;
  header["manifest"] = Json::parse(manifest_json);
  out_ << header.dump() << '\n' << std::flush;
}

void SessionLogWriter::write_step(const SessionStep& step) {
  const auto& o = step.outcome;
  Json line;
  line["seq"] = step.seq;
  line["item_id"] = step.item_id;
  line["score"] = o.score;
  line["theta_hat"] = step.estimate.theta_hat;
  line["se"] = step.estimate.se;
  line["tokens_prompt"] = o.tokens_prompt;
  line["tokens_completion"] = o.tokens_completion;
  line["latency_s"] = o.latency_s;
  line["raw_text_digest"] = o.raw_text ? Json(sha256_hex(*o.raw_text)) : Json(nullptr);
  line["chosen"] = o.chosen_letter ? Json(std::string(1, *o.chosen_letter)) : Json(nullptr);
  line["parse_ok"] = o.parse_ok;
  if (o.usage_missing) line["usage_missing"] = true;
  out_ << line.dump() << '\n' << std::flush;
}

void SessionLogWriter::write_summary(const std::string& label, const SessionResult& result) {
  Json summary;
  summary["model"] = label;
  summary["theta"] = result.final_estimate.theta_hat;
  summary["se"] = result.final_estimate.se;
  summary["accuracy"] = result.accuracy;
  summary["length"] = result.length();
  summary["tokens"] = result.tokens_total();
  summary["tokens_prompt"] = result.tokens_prompt;
  summary["tokens_completion"] = result.tokens_completion;
  summary["time_s"] = result.time_total_s;
  summary["elapsed_s"] = result.elapsed_s ? Json(*result.elapsed_s) : Json(nullptr);
  summary["stop_reason"] = std::string(to_string(result.stop_reason));
  summary["converged"] = result.converged;
  summary["parse_failures"] = result.parse_failures;
  Json line;
  line["summary"] = std::move(summary);
  out_ << line.dump() << '\n' << std::flush;
}

SessionLog read_session_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open session log " + path.string());
  SessionLog log;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto json = Json::parse(line, nullptr, false);
    if (json.is_discarded()) {
      if (in.peek() == std::char_traits<char>::eof()) break;  // torn last line
      throw ConfigError("session log line " + std::to_string(row) + " is not valid JSON");
    }
    if (json.contains("manifest")) {
      log.manifest_json = json["manifest"].dump();
      continue;
    }
    if (json.contains("summary")) {
      log.summary_json = json["summary"].dump();
      continue;
    }
    try {
      RecordedAnswer answer;
      answer.item_id = json.at("item_id").get<std::string>();
      auto& o = answer.outcome;
      o.score = json.at("score").get<int>();
      o.tokens_prompt = json.value("tokens_prompt", std::uint64_t{0});
      o.tokens_completion = json.value("tokens_completion", std::uint64_t{0});
      o.latency_s = json.value("latency_s", 0.0);
      o.parse_ok = json.value("parse_ok", true);
      o.usage_missing = json.value("usage_missing", false);
      if (json.contains("chosen") && json["chosen"].is_string()) {
        const auto chosen = json["chosen"].get<std::string>();
        if (chosen.size() == 1) o.chosen_letter = chosen[0];
      }
      log.answers.push_back(std::move(answer));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("session log line " + std::to_string(row) + ": " + e.what());
    }
  }
  return log;
}

}  // namespace irtcat
