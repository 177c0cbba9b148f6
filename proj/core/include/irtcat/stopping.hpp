#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace irtcat {

struct FixedLength {
  std::size_t items = 0;

  friend bool operator==(const FixedLength&, const FixedLength&) = default;
};

/// Stop once the SE falls to se_max (after at least min_items). max_items
/// caps runaway sessions; unset means "bank size".
struct SeThreshold {
  double se_max = 0.3;
  std::size_t min_items = 0;
  std::optional<std::size_t> max_items;

  friend bool operator==(const SeThreshold&, const SeThreshold&) = default;
};

using StoppingRule = std::variant<FixedLength, SeThreshold>;

enum class StopReason {
  FixedLength,
  Precision,
  Cap,
  BankExhausted,
  Aborted,  // respondent failure; only seen on partial transcripts
};

std::string_view to_string(StopReason reason) noexcept;

/// Throws ConfigError if the rule is malformed or infeasible for the bank size.
void validate_rule(const StoppingRule& rule, std::size_t bank_size);

/// Decision after `administered` responses with current standard error `se`.
/// Empty optional means "continue".
std::optional<StopReason> should_stop(std::size_t administered, double se, const StoppingRule& rule,
                                      std::size_t bank_size);

/// Parse `length:<n>` or `se:<x>[,min=<m>][,max=<M>]`.
StoppingRule parse_rule(std::string_view text);
std::string format_rule(const StoppingRule& rule);

/// "Length_50", "SE_0.316", ...
std::string rule_label(const StoppingRule& rule);

struct LabeledRule {
  std::string label;
  StoppingRule rule;
};

/// Six fixed lengths (50, 100, 150, 200, 300, 500) and five SE thresholds
/// (0.500, 0.447, 0.387, 0.316, 0.224) with no minimum and a bank-size cap.
std::vector<LabeledRule> paper_conditions(std::size_t bank_size);

}  // namespace irtcat
