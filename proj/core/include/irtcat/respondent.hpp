#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>

#include "irtcat/item_bank.hpp"
#include "irtcat/random.hpp"

namespace irtcat {

/// What a respondent produced for one item, plus what it cost.
struct AnswerOutcome {
  int score = 0;
  std::optional<std::string> raw_text;
  std::optional<char> chosen_letter;
  bool parse_ok = true;
  std::uint64_t tokens_prompt = 0;
  std::uint64_t tokens_completion = 0;
  double latency_s = 0.0;
  bool usage_missing = false;  // provider omitted usage; tokens recorded as 0
};

/// Source of answers. A session calls answer() at most once per item.
class Respondent {
 public:
  virtual ~Respondent() = default;
  virtual AnswerOutcome answer(const ItemParameters& item) = 0;
  /// True for respondents whose latency is real wall-clock time.
  virtual bool remote() const noexcept { return false; }
};

/// Bernoulli draw from the 2PL model.
AnswerOutcome simulate_response(double theta_true, const ItemParameters& item, RandomStream& rng);

/// Simulee with known ability; the answer sequence is a pure function of the seed.
class SimulatedRespondent final : public Respondent {
 public:
  SimulatedRespondent(double theta_true, std::uint64_t seed) : theta_(theta_true), rng_(seed) {}
  AnswerOutcome answer(const ItemParameters& item) override;
  double theta_true() const noexcept { return theta_; }

 private:
  double theta_;
  RandomStream rng_;
};

/// Replays fixed scores keyed by item id. Asking for an unscripted item throws.
class ScriptedRespondent final : public Respondent {
 public:
  explicit ScriptedRespondent(std::unordered_map<std::string, int> scores);
  AnswerOutcome answer(const ItemParameters& item) override;

 private:
  std::unordered_map<std::string, int> scores_;
};

/// Reads a script file with header `item_id,score`.
std::unordered_map<std::string, int> load_script(const std::filesystem::path& path);

/// One answer recorded in an earlier session log.
struct RecordedAnswer {
  std::string item_id;
  AnswerOutcome outcome;
};

/// Serves recorded answers (re-scored against the current key when a letter
/// was recorded) in their original order, then defers to `live`. Throws
/// ConfigError if the session asks for items in a different order than recorded.
class ReplayRespondent final : public Respondent {
 public:
  ReplayRespondent(std::deque<RecordedAnswer> recorded, Respondent& live);
  AnswerOutcome answer(const ItemParameters& item) override;
  bool remote() const noexcept override { return live_->remote(); }
  std::size_t pending() const noexcept { return recorded_.size(); }

 private:
  std::deque<RecordedAnswer> recorded_;
  Respondent* live_;
};

}  // namespace irtcat
