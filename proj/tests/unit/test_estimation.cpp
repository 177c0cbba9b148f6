#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "irtcat/error.hpp"
#include "irtcat/estimation.hpp"
#include "oracles.hpp"

using namespace irtcat;
using irtcat::testing::item;

namespace {

struct ResponseSet {
  std::vector<ItemParameters> items;
  std::vector<int> scores;

  std::vector<ResponseRecord> records() const {
    std::vector<ResponseRecord> out;
    for (std::size_t i = 0; i < items.size(); ++i) out.push_back({std::cref(items[i]), scores[i]});
    return out;
  }
  std::vector<oracle::Response> oracle() const {
    std::vector<oracle::Response> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      out.push_back({items[i].discrimination, items[i].difficulty, scores[i]});
    }
    return out;
  }
};

ResponseSet random_set(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> a(0.44, 1.52);
  std::uniform_real_distribution<double> b(-1.11, 1.44);
  std::uniform_real_distribution<double> theta(-2.5, 2.5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = theta(gen);
  ResponseSet s;
  for (std::size_t i = 0; i < n; ++i) {
    s.items.push_back(item("r" + std::to_string(i), a(gen), b(gen)));
    const double p = 1.0 / (1.0 + std::exp(-s.items.back().discrimination * (t - s.items.back().difficulty)));
    s.scores.push_back(u(gen) < p ? 1 : 0);
  }
  return s;
}

}  // namespace

TEST(Quadrature, DefaultGridShape) {
  const auto grid = default_grid();
  ASSERT_EQ(grid.size(), 121u);
  EXPECT_DOUBLE_EQ(grid.lower(), -4.0);
  EXPECT_DOUBLE_EQ(grid.upper(), 4.0);
  const auto pts = grid.points();
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_NEAR(pts[i] - pts[i - 1], 8.0 / 120.0, 1e-12);
  const auto w = grid.prior_weights();
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], w[w.size() - 1 - i], 1e-15);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  EXPECT_EQ(pts[60], 0.0);
}

TEST(Quadrature, RejectsBadGrids) {
  EXPECT_THROW(QuadratureGrid({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(QuadratureGrid({0.0, 1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(QuadratureGrid({0.0, 1.0}, {1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(QuadratureGrid({}, {}), std::invalid_argument);
}

TEST(Posterior, EmptyResponsesGiveThePrior) {
  const auto grid = default_grid();
  const auto post = posterior({}, grid);
  const auto w = grid.prior_weights();
  ASSERT_EQ(post.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(post[i], w[i]);
}

TEST(Posterior, CorrectResponseShiftsMassUp) {
  const auto grid = default_grid();
  const auto it = item("x", 1.0, 0.0);
  const std::vector<ResponseRecord> r{{std::cref(it), 1}};
  const auto post = posterior(r, grid);
  double above = 0.0, below = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.points()[i] > 0) above += post[i];
    if (grid.points()[i] < 0) below += post[i];
  }
  EXPECT_GT(above, below);
}

TEST(Posterior, FortyCorrectModeMatchesOracle) {
  const auto grid = default_grid();
  std::vector<ItemParameters> items(40, item("x", 1.01, 0.0));
  std::vector<ResponseRecord> r;
  std::vector<oracle::Response> o;
  for (const auto& it : items) {
    r.push_back({std::cref(it), 1});
    o.push_back({1.01, 0.0, 1});
  }
  const auto post = posterior(r, grid);
  const auto lib_mode = grid.points()[static_cast<std::size_t>(std::max_element(post.begin(), post.end()) - post.begin())];

  long double best = -1e300L, mode = 0.0L;
  for (int i = 0; i <= 10000; ++i) {
    const long double t = -4.0L + 8.0L * i / 10000.0L;
    const long double lp = oracle::log_posterior(o, t);
    if (lp > best) {
      best = lp;
      mode = t;
    }
  }
  double nearest = grid.points()[0];
  for (double p : grid.points()) {
    if (std::abs(p - static_cast<double>(mode)) < std::abs(nearest - static_cast<double>(mode))) nearest = p;
  }
  EXPECT_EQ(lib_mode, nearest);
}

TEST(Posterior, NormalizedForLargeResponseSets) {
  std::mt19937_64 gen(21);
  const auto grid = default_grid();
  for (std::size_t n : {1u, 10u, 200u, 1000u, 3000u}) {
    const auto s = random_set(n, gen);
    const auto post = posterior(s.records(), grid);
    EXPECT_NEAR(std::accumulate(post.begin(), post.end(), 0.0), 1.0, 1e-10) << n;
  }
}

TEST(Eap, PriorMoments) {
  const auto e = eap_estimate({}, default_grid());
  EXPECT_NEAR(e.theta_hat, 0.0, 1e-9);
  EXPECT_NEAR(e.se, 1.0, 0.01);
  EXPECT_LT(e.se, 1.0);
  EXPECT_EQ(e.n_items, 0u);
}

TEST(Eap, SymmetricPairCancels) {
  const auto x = item("x", 1.0, 0.0);
  const auto y = item("y", 1.0, 0.0);
  const std::vector<ResponseRecord> r{{std::cref(x), 1}, {std::cref(y), 0}};
  EXPECT_NEAR(eap_estimate(r, default_grid()).theta_hat, 0.0, 1e-9);
}

TEST(Eap, SingleResponseMatchesFineGrid) {
  const auto x = item("x", 1.2, 0.5);
  const std::vector<ResponseRecord> r{{std::cref(x), 1}};
  const auto e = eap_estimate(r, default_grid());
  const auto ref = oracle::fine_grid_eap({{1.2, 0.5, 1}});
  EXPECT_NEAR(e.theta_hat, static_cast<double>(ref.theta), 1e-3);
  EXPECT_NEAR(e.se, static_cast<double>(ref.se), 1e-3);
  EXPECT_GT(e.theta_hat, 0.0);
}

TEST(Eap, RandomSetsMatchFineGrid) {
  std::mt19937_64 gen(22);
  std::uniform_int_distribution<std::size_t> len(1, 100);
  const auto grid = default_grid();
  for (int i = 0; i < 40; ++i) {
    const auto s = random_set(len(gen), gen);
    const auto e = eap_estimate(s.records(), grid);
    const auto ref = oracle::fine_grid_eap(s.oracle());
    ASSERT_NEAR(e.theta_hat, static_cast<double>(ref.theta), 1e-3);
    ASSERT_NEAR(e.se, static_cast<double>(ref.se), 1e-3);
  }
}

TEST(Eap, MonotoneUpdate) {
  std::mt19937_64 gen(23);
  const auto grid = default_grid();
  std::uniform_int_distribution<std::size_t> len(0, 60);
  for (int i = 0; i < 200; ++i) {
    auto s = random_set(len(gen) + 1, gen);
    const auto extra = s.items.back();
    s.items.pop_back();
    s.scores.pop_back();
    const double base = eap_estimate(s.records(), grid).theta_hat;
    auto up = s;
    up.items.push_back(extra);
    up.scores.push_back(1);
    auto down = s;
    down.items.push_back(extra);
    down.scores.push_back(0);
    EXPECT_GE(eap_estimate(up.records(), grid).theta_hat, base);
    EXPECT_LE(eap_estimate(down.records(), grid).theta_hat, base);
  }
}

TEST(Eap, ExtremePatternStaysFinite) {
  std::vector<ItemParameters> items;
  std::mt19937_64 gen(24);
  std::uniform_real_distribution<double> a(0.44, 1.52);
  std::uniform_real_distribution<double> b(-1.11, 1.44);
  for (int i = 0; i < 500; ++i) items.push_back(item("x" + std::to_string(i), a(gen), b(gen)));
  std::vector<ResponseRecord> correct, wrong;
  for (const auto& it : items) {
    correct.push_back({std::cref(it), 1});
    wrong.push_back({std::cref(it), 0});
  }
  const auto grid = default_grid();
  const auto hi = eap_estimate(correct, grid);
  const auto lo = eap_estimate(wrong, grid);
  EXPECT_TRUE(std::isfinite(hi.theta_hat));
  EXPECT_TRUE(std::isfinite(hi.se));
  EXPECT_LT(hi.theta_hat, 4.0);
  EXPECT_GT(hi.theta_hat, 3.0);
  EXPECT_TRUE(std::isfinite(lo.theta_hat));
  EXPECT_GT(lo.theta_hat, -4.0);
}

TEST(Eap, OrderInvariantBitForBit) {
  std::mt19937_64 gen(25);
  const auto grid = default_grid();
  for (int i = 0; i < 50; ++i) {
    const auto s = random_set(80, gen);
    auto records = s.records();
    const auto ref = eap_estimate(records, grid);
    const auto ref_post = posterior(records, grid);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(records.begin(), records.end(), gen);
      ASSERT_EQ(eap_estimate(records, grid), ref);
      ASSERT_EQ(posterior(records, grid), ref_post);
    }
  }
}

TEST(Eap, GridRefinementConverges) {
  std::mt19937_64 gen(26);
  const auto coarse = default_grid();
  const auto fine = QuadratureGrid::standard_normal(241, -4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_set(50, gen);
    EXPECT_LT(std::abs(eap_estimate(s.records(), coarse).theta_hat - eap_estimate(s.records(), fine).theta_hat),
              1e-3);
  }
}

TEST(Accumulator, IncrementalEqualsBatch) {
  std::mt19937_64 gen(27);
  const auto grid = default_grid();
  const auto s = random_set(120, gen);
  std::vector<ItemParameters> items(s.items);
  const ItemBank bank(items);
  const LogLikelihoodTable table(bank, grid);
  EXPECT_TRUE(table.matches(grid));
  EXPECT_FALSE(table.matches(QuadratureGrid::standard_normal(61, -4.0, 4.0)));
  PosteriorAccumulator direct(grid);
  PosteriorAccumulator tabled(grid);
  auto records = s.records();
  for (std::size_t i = 0; i < items.size(); ++i) {
    direct.add(items[i], s.scores[i]);
    tabled.add_log_terms(table.terms(i, s.scores[i]));
    const std::span<const ResponseRecord> prefix(records.data(), i + 1);
    ASSERT_EQ(direct.estimate(), eap_estimate(prefix, grid));
    ASSERT_EQ(tabled.estimate(), direct.estimate());
  }
  EXPECT_EQ(direct.count(), items.size());
}

TEST(Reliability, ThresholdExamples) {
  EXPECT_NEAR(reliability_from_se(0.316), 0.900, 2e-4);
  EXPECT_NEAR(reliability_from_se(0.224), 0.950, 2e-4);
  EXPECT_EQ(reliability_from_se(0.5), 0.75);
  EXPECT_EQ(reliability_from_se(1.0), 0.0);
  EXPECT_NEAR(se_for_reliability(0.9), 0.316227766, 1e-6);
  EXPECT_EQ(se_for_reliability(0.75), 0.5);
  EXPECT_EQ(se_for_reliability(0.0), 1.0);
  EXPECT_THROW(se_for_reliability(1.0), std::invalid_argument);
  EXPECT_THROW(se_for_reliability(-0.1), std::invalid_argument);
}

TEST(Reliability, ThresholdsAreRoundedTargets) {
  // Each SE threshold is its target reliability's SE rounded to three decimals.
  const std::vector<std::pair<double, double>> pairs{
      {0.500, 0.750}, {0.447, 0.800}, {0.387, 0.850}, {0.316, 0.900}, {0.224, 0.950}};
  for (const auto& [se, rel] : pairs) {
    EXPECT_EQ(std::round(se_for_reliability(rel) * 1000.0) / 1000.0, se) << rel;
    EXPECT_EQ(std::round(reliability_from_se(se) * 1000.0) / 1000.0, rel) << se;
    EXPECT_NEAR(reliability_from_se(se_for_reliability(rel)), rel, 1e-15);
  }
}
