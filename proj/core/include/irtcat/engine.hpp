#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "irtcat/estimation.hpp"
#include "irtcat/error.hpp"
#include "irtcat/item_bank.hpp"
#include "irtcat/respondent.hpp"
#include "irtcat/selection.hpp"
#include "irtcat/stopping.hpp"

namespace irtcat {

struct SessionConfig {
  SelectionStrategy strategy = SelectionStrategy::MaxInformation;
  StoppingRule rule = SeThreshold{0.316, 0, std::nullopt};
  QuadratureGrid grid = default_grid();
  std::uint64_t seed = 0;
};

/// One administered item and the estimate right after its response.
struct SessionStep {
  std::size_t seq = 0;  // 1-based
  std::size_t item_index = 0;
  std::string item_id;
  AnswerOutcome outcome;
  AbilityEstimate estimate;
};

struct SessionResult {
  AbilityEstimate final_estimate;
  std::vector<SessionStep> steps;
  StopReason stop_reason = StopReason::FixedLength;
  bool converged = false;
  double accuracy = 0.0;
  std::uint64_t tokens_prompt = 0;
  std::uint64_t tokens_completion = 0;
  double time_total_s = 0.0;           // sum of per-item latencies
  std::optional<double> elapsed_s;     // session wall clock, remote respondents only
  std::size_t parse_failures = 0;
  std::size_t usage_missing = 0;

  std::uint64_t tokens_total() const noexcept { return tokens_prompt + tokens_completion; }
  std::size_t length() const noexcept { return steps.size(); }
};

/// The respondent failed mid-session. Carries the transcript so far.
class SessionError : public Error {
 public:
  SessionError(const std::string& message, std::string item_id, SessionResult partial);
  const std::string& item_id() const noexcept { return item_id_; }
  const SessionResult& partial() const noexcept { return partial_; }

 private:
  std::string item_id_;
  SessionResult partial_;
};

struct SessionHooks {
  /// Called after every response, e.g. to flush a session log line.
  std::function<void(const SessionStep&)> on_step;
  /// Optional precomputed log-likelihoods for (bank, grid); must match the session grid.
  const LogLikelihoodTable* table = nullptr;
  /// Optional MFI search index built from the session bank.
  const InformationIndex* index = nullptr;
};

/// Stream id for the selection RNG derived from SessionConfig::seed.
inline constexpr std::uint64_t kSelectionStream = 0x5e1ec7;

/// Adaptive session: random first item, then respond -> EAP update ->
/// stop check -> next item, until the stopping rule fires or the pool empties.
SessionResult run_cat_session(const ItemBank& bank, Respondent& respondent, const SessionConfig& config,
                              const SessionHooks& hooks = {});

/// Non-adaptive administration of every item in bank order.
SessionResult run_full_bank(const ItemBank& bank, Respondent& respondent, const QuadratureGrid& grid,
                            const SessionHooks& hooks = {});

}  // namespace irtcat
