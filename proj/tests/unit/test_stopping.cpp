#include <gtest/gtest.h>

#include "irtcat/error.hpp"
#include "irtcat/stopping.hpp"

using namespace irtcat;

TEST(Stopping, FixedLengthStopsAtN) {
  const StoppingRule rule = FixedLength{50};
  EXPECT_EQ(should_stop(50, 0.9, rule, 2815), StopReason::FixedLength);
  EXPECT_EQ(should_stop(50, 0.01, rule, 2815), StopReason::FixedLength);
  EXPECT_FALSE(should_stop(49, 0.01, rule, 2815));
}

TEST(Stopping, SeThreshold) {
  const StoppingRule rule = SeThreshold{0.316, 0, 500};
  EXPECT_EQ(should_stop(10, 0.30, rule, 2815), StopReason::Precision);
  EXPECT_FALSE(should_stop(499, 0.32, rule, 2815));
  EXPECT_EQ(should_stop(500, 0.32, rule, 2815), StopReason::Cap);
  EXPECT_EQ(should_stop(500, 0.30, rule, 2815), StopReason::Precision);
  EXPECT_EQ(should_stop(3, 0.316, rule, 2815), StopReason::Precision);
}

TEST(Stopping, MinimumItemsDelaysPrecisionStop) {
  const StoppingRule rule = SeThreshold{0.4, 10, std::nullopt};
  EXPECT_FALSE(should_stop(5, 0.1, rule, 100));
  EXPECT_EQ(should_stop(10, 0.1, rule, 100), StopReason::Precision);
  EXPECT_EQ(should_stop(100, 0.5, rule, 100), StopReason::Cap);
}

TEST(Stopping, Validation) {
  EXPECT_NO_THROW(validate_rule(FixedLength{100}, 100));
  EXPECT_THROW(validate_rule(FixedLength{101}, 100), ConfigError);
  EXPECT_THROW(validate_rule(FixedLength{0}, 100), ConfigError);
  EXPECT_THROW(validate_rule(SeThreshold{0.0, 0, std::nullopt}, 100), ConfigError);
  EXPECT_THROW(validate_rule(SeThreshold{1.0, 0, std::nullopt}, 100), ConfigError);
  EXPECT_THROW(validate_rule(SeThreshold{0.3, 20, 10}, 100), ConfigError);
  EXPECT_THROW(validate_rule(SeThreshold{0.3, 101, std::nullopt}, 100), ConfigError);
  EXPECT_NO_THROW(validate_rule(SeThreshold{0.3, 0, 5000}, 100));
}

TEST(Stopping, ParseAndFormatRoundTrip) {
  EXPECT_EQ(parse_rule("length:50"), StoppingRule(FixedLength{50}));
  EXPECT_EQ(parse_rule("se:0.316"), StoppingRule(SeThreshold{0.316, 0, std::nullopt}));
  EXPECT_EQ(parse_rule("se:0.3,min=5,max=80"), StoppingRule(SeThreshold{0.3, 5, 80}));
  for (const char* text : {"length:7", "se:0.316", "se:0.224,min=3", "se:0.5,max=40", "se:0.25,min=2,max=9"}) {
    EXPECT_EQ(format_rule(parse_rule(text)), text);
  }
  for (const char* bad : {"", "length", "length:", "length:0", "length:-3", "length:5x", "se:", "se:abc", "se:1.5",
                          "se:0", "se:0.3,foo=1", "se:0.3,min=9,max=3", "kl:0.3", "se:0.3,max=0"}) {
    EXPECT_THROW(parse_rule(bad), ConfigError) << bad;
  }
}

TEST(Stopping, Labels) {
  EXPECT_EQ(rule_label(FixedLength{50}), "Length_50");
  EXPECT_EQ(rule_label(SeThreshold{0.316, 0, std::nullopt}), "SE_0.316");
  EXPECT_EQ(rule_label(SeThreshold{0.5, 0, std::nullopt}), "SE_0.500");
}

TEST(Stopping, PaperConditions) {
  const auto rules = paper_conditions(2815);
  ASSERT_EQ(rules.size(), 11u);
  const char* labels[] = {"Length_50", "Length_100", "Length_150", "Length_200", "Length_300", "Length_500",
                          "SE_0.500",  "SE_0.447",   "SE_0.387",   "SE_0.316",   "SE_0.224"};
  for (std::size_t i = 0; i < rules.size(); ++i) {
    EXPECT_EQ(rules[i].label, labels[i]);
    EXPECT_NO_THROW(validate_rule(rules[i].rule, 2815));
  }
  EXPECT_EQ(std::get<SeThreshold>(rules[9].rule).se_max, 0.316);
  EXPECT_EQ(std::get<SeThreshold>(rules[9].rule).max_items, 2815u);
  EXPECT_EQ(std::get<FixedLength>(rules[5].rule), FixedLength{500});
}

TEST(Stopping, ReasonNames) {
  EXPECT_EQ(to_string(StopReason::Precision), "precision");
  EXPECT_EQ(to_string(StopReason::Aborted), "aborted");
}
