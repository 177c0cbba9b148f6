#include "irtcat/engine.hpp"

#include <chrono>
#include <stdexcept>

namespace irtcat {

namespace {

class SessionRecorder {
 public:
  SessionRecorder(const ItemBank& bank, Respondent& respondent, const QuadratureGrid& grid, const SessionHooks& hooks)
      : bank_(bank), respondent_(respondent), hooks_(hooks), acc_(grid) {
    if (hooks_.table != nullptr && !hooks_.table->matches(grid)) {
      throw std::invalid_argument("log-likelihood table was built for a different grid");
    }
    if (respondent_.remote()) started_ = std::chrono::steady_clock::now();
  }

  const AbilityEstimate& administer(std::size_t index) {
    const ItemParameters& item = bank_[index];
    AnswerOutcome outcome;
    try {
      outcome = respondent_.answer(item);
    } catch (const Error& e) {
      throw SessionError(e.what(), item.id, finish(StopReason::Aborted, false));
    }
    if (outcome.score != 0 && outcome.score != 1) throw InternalError("respondent returned a score outside {0,1}");
    if (hooks_.table != nullptr) {
      acc_.add_log_terms(hooks_.table->terms(index, outcome.score));
    } else {
      acc_.add(item, outcome.score);
    }
    SessionStep step;
    step.seq = result_.steps.size() + 1;
    step.item_index = index;
    step.item_id = item.id;
    step.estimate = acc_.estimate();
    step.outcome = std::move(outcome);
    result_.steps.push_back(std::move(step));
    if (hooks_.on_step) hooks_.on_step(result_.steps.back());
    return result_.steps.back().estimate;
  }

  SessionResult finish(StopReason reason, bool converged) {
    result_.stop_reason = reason;
    result_.converged = converged;
    result_.final_estimate = result_.steps.empty() ? acc_.estimate() : result_.steps.back().estimate;
    std::size_t correct = 0;
    for (const auto& step : result_.steps) {
      correct += static_cast<std::size_t>(step.outcome.score);
      result_.tokens_prompt += step.outcome.tokens_prompt;
      result_.tokens_completion += step.outcome.tokens_completion;
      result_.time_total_s += step.outcome.latency_s;
      result_.parse_failures += step.outcome.parse_ok ? 0 : 1;
      result_.usage_missing += step.outcome.usage_missing ? 1 : 0;
    }
    result_.accuracy =
        result_.steps.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(result_.steps.size());
    if (started_) {
      result_.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - *started_).count();
    }
    return std::move(result_);
  }

 private:
  const ItemBank& bank_;
  Respondent& respondent_;
  const SessionHooks& hooks_;
  PosteriorAccumulator acc_;
  SessionResult result_;
  std::optional<std::chrono::steady_clock::time_point> started_;
};

bool converges(StopReason reason) {
  return reason == StopReason::FixedLength || reason == StopReason::Precision;
}

}  // namespace

SessionError::SessionError(const std::string& message, std::string item_id, SessionResult partial)
    : Error("session aborted at item '" + item_id + "' after " + std::to_string(partial.steps.size()) +
            " responses: " + message),
      item_id_(std::move(item_id)),
      partial_(std::move(partial)) {}

SessionResult run_cat_session(const ItemBank& bank, Respondent& respondent, const SessionConfig& config,
                              const SessionHooks& hooks) {
  validate_rule(config.rule, bank.size());
  RandomStream rng(derive_seed(config.seed, kSelectionStream));
  ItemPool pool(bank.size());
  SessionRecorder recorder(bank, respondent, config.grid, hooks);

  std::size_t next = first_item(bank, rng);
  for (;;) {
    pool.mark(next);
    const AbilityEstimate estimate = recorder.administer(next);
    if (const auto reason = should_stop(estimate.n_items, estimate.se, config.rule, bank.size())) {
      return recorder.finish(*reason, converges(*reason));
    }
    if (pool.remaining() == 0) return recorder.finish(StopReason::BankExhausted, false);
    next = select_next(bank, pool, estimate.theta_hat, config.strategy, rng, hooks.index);
  }
}

SessionResult run_full_bank(const ItemBank& bank, Respondent& respondent, const QuadratureGrid& grid,
                            const SessionHooks& hooks) {
  SessionRecorder recorder(bank, respondent, grid, hooks);
  for (std::size_t i = 0; i < bank.size(); ++i) recorder.administer(i);
  return recorder.finish(StopReason::FixedLength, true);
}

}  // namespace irtcat
