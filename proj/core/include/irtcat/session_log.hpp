#pragma once

#include <deque>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "irtcat/engine.hpp"
#include "irtcat/respondent.hpp"

namespace irtcat {

/// Line-delimited JSON session log.
///
/// Line 1 is `{"manifest": {...}}`; then one record per administered item
/// `{seq, item_id, score, theta_hat, se, tokens_prompt, tokens_completion,
/// latency_s, raw_text_digest, chosen, parse_ok}`, flushed as it is written;
/// the last line is `{"summary": {...}}` with the summary-row fields.
class SessionLogWriter {
 public:
  /// `manifest_json` must be a JSON object.
  SessionLogWriter(const std::filesystem::path& path, const std::string& manifest_json);

  void write_step(const SessionStep& step);
  void write_summary(const std::string& label, const SessionResult& result);

 private:
  std::ofstream out_;
};

struct SessionLog {
  std::string manifest_json;
  std::deque<RecordedAnswer> answers;
  std::optional<std::string> summary_json;
};

/// Parse a session log; a truncated final line (crash mid-write) is ignored.
SessionLog read_session_log(const std::filesystem::path& path);

}  // namespace irtcat
