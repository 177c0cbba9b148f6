#include "irtcat/llm_respondent.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "irtcat/error.hpp"

namespace irtcat {

namespace {

constexpr std::string_view kPromptHead =
    "Please answer the following single-choice question.\n"
    "Instructions: 1. Choose the correct option letter from the given choices; 2.\n"
    "Output ONLY the letter of the correct answer. Do not include any explanations or extra text.\n"
    "Example:\n"
    "Question:\n"
    "This is an example question stem where you need to choose the correct answer.\n"
    "Options:\n"
    "A.Incorrect answer\n"
    "B.Incorrect answer\n"
    "C.Correct answer\n"
    "D.Incorrect answer\n"
    "E.Incorrect answer\n"
    "Answer: C\n"
    "Now, here is the question you need to answer. Again, output ONLY the letter of the correct answer:\n";

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // path prefix without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? std::string{} : url.substr(path_start);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

struct LlmRespondent::Reply {
  std::string content;
  std::optional<std::uint64_t> prompt_tokens;
  std::optional<std::uint64_t> completion_tokens;
  double latency_s = 0.0;
};

class LlmRespondent::Transport {
 public:
  explicit Transport(const LlmEndpointConfig& config) : url_(split_url(config.base_url)), client_(url_.origin) {
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config.request_timeout_s));
    client_.set_connection_timeout(timeout);
    client_.set_read_timeout(timeout);
    client_.set_write_timeout(timeout);
    client_.set_keep_alive(true);
    if (!config.api_key.empty()) headers_.emplace("Authorization", "Bearer " + config.api_key);
  }

  httplib::Result post(const std::string& body) {
    return client_.Post(url_.path + "/chat/completions", headers_, body, "application/json");
  }

 private:
  SplitUrl url_;
  httplib::Client client_;
  httplib::Headers headers_;
};

void validate_endpoint(const LlmEndpointConfig& config) {
  if (config.base_url.empty()) throw ConfigError("endpoint base URL is required");
  if (config.model.empty()) throw ConfigError("model name is required");
  (void)split_url(config.base_url);
  if (!config.allow_sampling_override && (config.temperature != 0.0 || config.top_p != 1.0)) {
    throw ConfigError("temperature must be 0.0 and top_p 1.0 unless the sampling override is set");
  }
  if (!(config.temperature >= 0.0) || !(config.top_p > 0.0 && config.top_p <= 1.0)) {
    throw ConfigError("temperature must be >= 0 and top_p in (0, 1]");
  }
  if (config.max_retries < 0) throw ConfigError("max_retries must be non-negative");
  if (!(config.request_timeout_s > 0.0)) throw ConfigError("request timeout must be positive");
}

std::string render_prompt(const ItemParameters& item) {
  if (!item.has_content()) throw ConfigError("item '" + item.id + "' has no stem/options to present");
  std::string out(kPromptHead);
  out += "Question:\n";
  out += item.stem;
  out += "\nOptions:";
  for (const auto& option : item.options) {
    out += '\n';
    out += option.letter;
    out += '.';
    out += option.text;
  }
  return out;
}

std::optional<char> parse_answer(std::string_view raw) {
  std::size_t start = 0;
  while (start < raw.size() && std::isspace(static_cast<unsigned char>(raw[start]))) ++start;
  raw.remove_prefix(start);
  if (raw.size() >= 7) {
    std::string head(raw.substr(0, 7));
    for (char& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (head == "answer:") raw.remove_prefix(7);
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(raw[i])));
    if (upper < 'A' || upper > 'E') continue;
    const bool letter_before = i > 0 && is_letter(raw[i - 1]);
    const bool letter_after = i + 1 < raw.size() && is_letter(raw[i + 1]);
    if (!letter_before && !letter_after) return upper;
  }
  return std::nullopt;
}

std::string build_chat_request(const LlmEndpointConfig& config, std::string_view prompt) {
  nlohmann::ordered_json body;
  body["model"] = config.model;
  body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", std::string(prompt)}}});
  body["temperature"] = config.temperature;
  body["top_p"] = config.top_p;
  return body.dump();
}

LlmRespondent::LlmRespondent(LlmEndpointConfig config) : config_(std::move(config)) {
  validate_endpoint(config_);
  transport_ = std::make_unique<Transport>(config_);
}

LlmRespondent::~LlmRespondent() = default;

LlmRespondent::Reply LlmRespondent::send(const std::string& item_id, const std::string& body) {
  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0 && config_.retry_backoff_s > 0.0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(config_.retry_backoff_s * std::ldexp(1.0, attempt - 1)));
    }
    const auto started = std::chrono::steady_clock::now();
    auto result = transport_->post(body);
    const double latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    ++requests_sent_;

    if (!result) {
      last_failure = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    const int status = result->status;
    if (status >= 400 && !retryable_status(status)) {
      throw ConfigError(fmt::format("endpoint rejected request for item '{}' with HTTP {}: {}", item_id, status,
                                    result->body.substr(0, 200)));
    }
    if (status != 200) {
      last_failure = fmt::format("HTTP {}", status);
      continue;
    }
    const auto json = nlohmann::json::parse(result->body, nullptr, false);
    const nlohmann::json* message = nullptr;
    if (!json.is_discarded() && json.contains("choices") && json["choices"].is_array() && !json["choices"].empty() &&
        json["choices"][0].contains("message")) {
      message = &json["choices"][0]["message"];
    }
    if (message == nullptr) {
      last_failure = "malformed completion body";
      continue;
    }
    Reply reply;
    reply.latency_s = latency;
    if (message->contains("content") && (*message)["content"].is_string()) {
      reply.content = (*message)["content"].get<std::string>();
    }
    if (json.contains("usage") && json["usage"].is_object()) {
      const auto& usage = json["usage"];
      if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number_unsigned()) {
        reply.prompt_tokens = usage["prompt_tokens"].get<std::uint64_t>();
      }
      if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number_unsigned()) {
        reply.completion_tokens = usage["completion_tokens"].get<std::uint64_t>();
      }
    }
    return reply;
  }
  throw TransportError(fmt::format("giving up after {} attempts ({})", config_.max_retries + 1, last_failure),
                       item_id);
}

AnswerOutcome LlmRespondent::answer(const ItemParameters& item) {
  const std::string body = build_chat_request(config_, render_prompt(item));
  AnswerOutcome out;
  std::optional<char> letter;
  for (int attempt = 0; attempt < 2 && !letter; ++attempt) {
    Reply reply = send(item.id, body);
    out.tokens_prompt += reply.prompt_tokens.value_or(0);
    out.tokens_completion += reply.completion_tokens.value_or(0);
    out.usage_missing = out.usage_missing || !reply.prompt_tokens || !reply.completion_tokens;
    out.latency_s += reply.latency_s;
    letter = parse_answer(reply.content);
    out.raw_text = std::move(reply.content);
  }
  out.chosen_letter = letter;
  out.parse_ok = letter.has_value();
  out.score = letter && item.answer_key && *letter == *item.answer_key ? 1 : 0;
  return out;
}

}  // namespace irtcat
