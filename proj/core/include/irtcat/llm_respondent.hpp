#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "irtcat/respondent.hpp"

namespace irtcat {

/// An OpenAI-compatible chat-completions endpoint.
struct LlmEndpointConfig {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string model;
  std::string api_key;   // never logged
  double temperature = 0.0;
  double top_p = 1.0;
  double request_timeout_s = 120.0;
  int max_retries = 3;
  double retry_backoff_s = 1.0;  // doubled after each transport failure
  bool allow_sampling_override = false;
};

/// Throws ConfigError for a missing URL/model or, without the override flag,
/// any temperature other than 0 or top_p other than 1.
void validate_endpoint(const LlmEndpointConfig& config);

/// Full prompt for one multiple-choice item. Byte-stable; throws ConfigError
/// for items without stem/options.
std::string render_prompt(const ItemParameters& item);

/// First standalone option letter A..E (case-insensitive) after stripping an
/// optional leading "Answer:". "Standalone" means not adjacent to another
/// letter. Empty optional when none is found.
std::optional<char> parse_answer(std::string_view raw);

/// JSON body of one chat-completions request: a single user message.
std::string build_chat_request(const LlmEndpointConfig& config, std::string_view prompt);

/// Answers items by querying a remote model.
///
/// Transport failures, timeouts, HTTP 408/429 and 5xx are retried up to
/// max_retries times and then raise TransportError. Other 4xx responses raise
/// ConfigError. An unparseable reply is re-asked once with the identical
/// request; a second failure scores 0 with parse_ok = false. Tokens and
/// latency of every request count towards the outcome.
class LlmRespondent final : public Respondent {
 public:
  explicit LlmRespondent(LlmEndpointConfig config);
  ~LlmRespondent() override;
  LlmRespondent(const LlmRespondent&) = delete;
  LlmRespondent& operator=(const LlmRespondent&) = delete;

  AnswerOutcome answer(const ItemParameters& item) override;
  bool remote() const noexcept override { return true; }

  std::size_t requests_sent() const noexcept { return requests_sent_; }

 private:
  struct Reply;
  class Transport;

  Reply send(const std::string& item_id, const std::string& body);

  LlmEndpointConfig config_;
  std::unique_ptr<Transport> transport_;
  std::size_t requests_sent_ = 0;
};

}  // namespace irtcat
