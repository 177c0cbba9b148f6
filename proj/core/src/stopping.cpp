#include "irtcat/stopping.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "irtcat/error.hpp"

namespace irtcat {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || result.ec != std::errc() || result.ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ConfigError(fmt::format("invalid {} '{}'", what, text));
  }
  return value;
}

std::string shortest(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

}  // namespace

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::FixedLength:
      return "fixed_length";
    case StopReason::Precision:
      return "precision";
    case StopReason::Cap:
      return "cap";
    case StopReason::BankExhausted:
      return "bank_exhausted";
    case StopReason::Aborted:
      return "aborted";
  }
  return "fixed_length";
}

void validate_rule(const StoppingRule& rule, std::size_t bank_size) {
  std::visit(Overloaded{
                 [&](const FixedLength& r) {
                   if (r.items < 1 || r.items > bank_size) {
                     throw ConfigError(fmt::format("fixed length {} must lie in [1, {}] for this bank",
                                                   r.items, bank_size));
                   }
                 },
                 [&](const SeThreshold& r) {
                   if (!(r.se_max > 0.0 && r.se_max < 1.0)) {
                     throw ConfigError(fmt::format("SE threshold {} must lie in (0, 1)", r.se_max));
                   }
                   const std::size_t cap = r.max_items.value_or(bank_size);
                   if (cap < 1) throw ConfigError("SE rule max_items must be positive");
                   if (r.min_items > cap) {
                     throw ConfigError(fmt::format("SE rule min_items {} exceeds max_items {}", r.min_items, cap));
                   }
                 },
             },
             rule);
}

std::optional<StopReason> should_stop(std::size_t administered, double se, const StoppingRule& rule,
                                      std::size_t bank_size) {
  return std::visit(Overloaded{
                        [&](const FixedLength& r) -> std::optional<StopReason> {
                          if (administered >= r.items) return StopReason::FixedLength;
                          return std::nullopt;
                        },
                        [&](const SeThreshold& r) -> std::optional<StopReason> {
                          if (administered >= r.min_items && se <= r.se_max) return StopReason::Precision;
                          if (administered >= r.max_items.value_or(bank_size)) return StopReason::Cap;
                          return std::nullopt;
                        },
                    },
                    rule);
}

StoppingRule parse_rule(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError(fmt::format("rule '{}' must look like length:<n> or se:<x>[,min=<m>][,max=<M>]", text));
  }
  const std::string_view kind = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);
  if (kind == "length") {
    const auto n = parse_count(rest, "fixed length");
    if (n == 0) throw ConfigError("fixed length must be positive");
    return FixedLength{n};
  }
  if (kind != "se") throw ConfigError(fmt::format("unknown rule kind '{}'", kind));

  SeThreshold rule;
  const auto comma = rest.find(',');
  rule.se_max = parse_real(rest.substr(0, comma), "SE threshold");
  if (!(rule.se_max > 0.0 && rule.se_max < 1.0)) throw ConfigError("SE threshold must lie in (0, 1)");
  if (comma != std::string_view::npos) {
    std::string_view options = rest.substr(comma + 1);
    for (;;) {
      const auto next = options.find(',');
      const std::string_view option = options.substr(0, next);
      if (option.starts_with("min=")) {
        rule.min_items = parse_count(option.substr(4), "min_items");
      } else if (option.starts_with("max=")) {
        rule.max_items = parse_count(option.substr(4), "max_items");
        if (*rule.max_items == 0) throw ConfigError("max_items must be positive");
      } else {
        throw ConfigError(fmt::format("unknown SE rule option '{}'", option));
      }
      if (next == std::string_view::npos) break;
      options = options.substr(next + 1);
    }
  }
  if (rule.max_items && rule.min_items > *rule.max_items) throw ConfigError("min_items exceeds max_items");
  return rule;
}

std::string format_rule(const StoppingRule& rule) {
  return std::visit(Overloaded{
                        [](const FixedLength& r) { return fmt::format("length:{}", r.items); },
                        [](const SeThreshold& r) {
                          std::string out = "se:" + shortest(r.se_max);
                          if (r.min_items > 0) out += fmt::format(",min={}", r.min_items);
                          if (r.max_items) out += fmt::format(",max={}", *r.max_items);
                          return out;
                        },
                    },
                    rule);
}

std::string rule_label(const StoppingRule& rule) {
  return std::visit(Overloaded{
                        [](const FixedLength& r) { return fmt::format("Length_{}", r.items); },
                        [](const SeThreshold& r) { return fmt::format("SE_{:.3f}", r.se_max); },
                    },
                    rule);
}

std::vector<LabeledRule> paper_conditions(std::size_t bank_size) {
  std::vector<LabeledRule> out;
  for (std::size_t n : {50, 100, 150, 200, 300, 500}) {
    StoppingRule rule = FixedLength{n};
    out.push_back({rule_label(rule), rule});
  }
  for (double se : {0.500, 0.447, 0.387, 0.316, 0.224}) {
    StoppingRule rule = SeThreshold{se, 0, bank_size};
    out.push_back({rule_label(rule), rule});
  }
  return out;
}

}  // namespace irtcat
