#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace irtcat {

/// Estimates paired with the values they estimate. Both spans must have the
/// same length and finite entries (checked by every metric).
struct PairedVector {
  std::span<const double> estimates;
  std::span<const double> truths;
};

/// Mean signed error.
double bias(PairedVector v);

/// Root mean squared error.
double rmse(PairedVector v);

/// Product-moment correlation. Throws MetricError for fewer than two pairs
/// or a constant vector.
double pearson(PairedVector v);

/// Pearson correlation of average ranks (ties share their mean rank).
double spearman(PairedVector v);

/// 1-based ranks, ties receiving the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// 1-based ranks in descending order of value, ties broken by position
/// (earlier entry ranks higher). A leaderboard position for each entry.
std::vector<double> ordinal_ranks_descending(std::span<const double> values);

/// Spearman correlation of leaderboard positions (see ordinal_ranks_descending).
double leaderboard_rank_correlation(PairedVector v);

/// Average test length.
double atl(std::span<const std::size_t> lengths);

/// Relative metrics are percentages. std::nullopt is the typed "N/A" for a
/// zero baseline, which would otherwise produce an infinite ratio.
using Percent = std::optional<double>;

/// Test length reduction (1 - atl/ttl) * 100. Requires 0 < atl <= ttl.
double tlr(double atl, std::size_t ttl);

/// (1 - |condition / full|) * 100 for bias, RMSE and correlation.
Percent bir(double bias_condition, double bias_full);
Percent rir(double rmse_condition, double rmse_full);
Percent clr(double cor_condition, double cor_full);

/// "97.9" style formatting with one decimal; "NA" for N/A.
std::string format_percent(const Percent& value);

}  // namespace irtcat
