#include "irtcat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "irtcat/error.hpp"

namespace irtcat {

namespace {

void check(PairedVector v, std::size_t min_size) {
  if (v.estimates.size() != v.truths.size()) throw MetricError("paired vectors differ in length");
  if (v.estimates.size() < min_size) {
    throw MetricError(fmt::format("metric needs at least {} pairs, got {}", min_size, v.estimates.size()));
  }
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(v.estimates.begin(), v.estimates.end(), finite) ||
      !std::all_of(v.truths.begin(), v.truths.end(), finite)) {
    throw MetricError("paired vectors must be finite");
  }
}

double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

bool has_ties(std::span<const double> ranks) {
  std::vector<double> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

// Exact for tie-free rank vectors, so identical orderings give exactly 1.
double rank_correlation(std::span<const double> ra, std::span<const double> rb) {
  if (has_ties(ra) || has_ties(rb)) return pearson({ra, rb});
  const auto n = static_cast<double>(ra.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

Percent ratio_metric(double condition, double full) {
  if (full == 0.0) return std::nullopt;
  return (1.0 - std::abs(condition / full)) * 100.0;
}

}  // namespace

double bias(PairedVector v) {
  check(v, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < v.estimates.size(); ++i) total += v.estimates[i] - v.truths[i];
  return total / static_cast<double>(v.estimates.size());
}

double rmse(PairedVector v) {
  check(v, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < v.estimates.size(); ++i) {
    const double d = v.estimates[i] - v.truths[i];
    total += d * d;
  }
  return std::sqrt(total / static_cast<double>(v.estimates.size()));
}

double pearson(PairedVector v) {
  check(v, 2);
  const double mx = mean(v.estimates);
  const double my = mean(v.truths);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < v.estimates.size(); ++i) {
    const double dx = v.estimates[i] - mx;
    const double dy = v.truths[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw MetricError("correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> ordinal_ranks_descending(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = static_cast<double>(pos + 1);
  return ranks;
}

double spearman(PairedVector v) {
  check(v, 2);
  const auto ra = average_ranks(v.estimates);
  const auto rb = average_ranks(v.truths);
  return rank_correlation(ra, rb);
}

double leaderboard_rank_correlation(PairedVector v) {
  check(v, 2);
  const auto ra = ordinal_ranks_descending(v.estimates);
  const auto rb = ordinal_ranks_descending(v.truths);
  return rank_correlation(ra, rb);
}

double atl(std::span<const std::size_t> lengths) {
  if (lengths.empty()) throw MetricError("average test length of no sessions");
  double total = 0.0;
  for (auto n : lengths) total += static_cast<double>(n);
  return total / static_cast<double>(lengths.size());
}

double tlr(double atl, std::size_t ttl) {
  if (ttl == 0) throw MetricError("full-bank length must be positive");
  if (!(atl > 0.0) || atl > static_cast<double>(ttl)) {
    throw MetricError(fmt::format("average length {} must lie in (0, {}]", atl, ttl));
  }
  return (1.0 - atl / static_cast<double>(ttl)) * 100.0;
}

Percent bir(double bias_condition, double bias_full) { return ratio_metric(bias_condition, bias_full); }

Percent rir(double rmse_condition, double rmse_full) { return ratio_metric(rmse_condition, rmse_full); }

Percent clr(double cor_condition, double cor_full) { return ratio_metric(cor_condition, cor_full); }

std::string format_percent(const Percent& value) {
  if (!value) return "NA";
  return fmt::format("{:.1f}", *value);
}

}  // namespace irtcat
