#include "irtcat/respondent.hpp"

#include <fstream>
#include <sstream>

#include "irtcat/error.hpp"
#include "irtcat/irt.hpp"

namespace irtcat {

AnswerOutcome simulate_response(double theta_true, const ItemParameters& item, RandomStream& rng) {
  AnswerOutcome out;
  out.score = rng.uniform() < prob_correct(item, theta_true) ? 1 : 0;
  return out;
}

AnswerOutcome SimulatedRespondent::answer(const ItemParameters& item) {
  return simulate_response(theta_, item, rng_);
}

ScriptedRespondent::ScriptedRespondent(std::unordered_map<std::string, int> scores) : scores_(std::move(scores)) {
  for (const auto& [id, score] : scores_) {
    if (score != 0 && score != 1) throw ConfigError("scripted score for '" + id + "' must be 0 or 1");
  }
}

AnswerOutcome ScriptedRespondent::answer(const ItemParameters& item) {
  const auto it = scores_.find(item.id);
  if (it == scores_.end()) throw ConfigError("no scripted answer for item '" + item.id + "'");
  AnswerOutcome out;
  out.score = it->second;
  return out;
}

std::unordered_map<std::string, int> load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open script " + path.string());
  std::unordered_map<std::string, int> scores;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (row == 1 && line.rfind("item_id,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("script row " + std::to_string(row) + ": expected item_id,score");
    const std::string id = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    if (value != "0" && value != "1") {
      throw ConfigError("script row " + std::to_string(row) + ": score must be 0 or 1");
    }
    if (!scores.emplace(id, value == "1" ? 1 : 0).second) {
      throw ConfigError("script row " + std::to_string(row) + ": duplicate item '" + id + "'");
    }
  }
  return scores;
}

ReplayRespondent::ReplayRespondent(std::deque<RecordedAnswer> recorded, Respondent& live)
    : recorded_(std::move(recorded)), live_(&live) {}

AnswerOutcome ReplayRespondent::answer(const ItemParameters& item) {
  if (recorded_.empty()) return live_->answer(item);
  RecordedAnswer next = std::move(recorded_.front());
  recorded_.pop_front();
  if (next.item_id != item.id) {
    throw ConfigError("resume log diverges: recorded item '" + next.item_id + "' but session selected '" +
                      item.id + "' (seed, bank or rule differ)");
  }
  AnswerOutcome out = std::move(next.outcome);
  if (out.chosen_letter && item.answer_key) out.score = *out.chosen_letter == *item.answer_key ? 1 : 0;
  return out;
}

}  // namespace irtcat
