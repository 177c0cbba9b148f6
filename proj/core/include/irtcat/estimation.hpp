#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "irtcat/item_bank.hpp"

namespace irtcat {

/// Discretized prior g(theta): ordered nodes with normalized weights.
class QuadratureGrid {
 public:
  /// Validates ordering and positivity, then renormalizes the weights to sum 1.
  QuadratureGrid(std::vector<double> points, std::vector<double> prior_weights);

  /// `n` equally spaced nodes on [lo, hi] weighted by the standard normal density.
  static QuadratureGrid standard_normal(std::size_t n, double lo, double hi);

  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> prior_weights() const noexcept { return weights_; }
  std::span<const double> log_prior_weights() const noexcept { return log_weights_; }
  std::size_t size() const noexcept { return points_.size(); }
  double lower() const noexcept { return points_.front(); }
  double upper() const noexcept { return points_.back(); }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
};

/// 121 equally spaced nodes on [-4, 4] with a standard normal prior.
QuadratureGrid default_grid();

struct ResponseRecord {
  std::reference_wrapper<const ItemParameters> item;
  int score = 0;
};

struct AbilityEstimate {
  double theta_hat = 0.0;  // posterior mean
  double se = 1.0;         // posterior standard deviation
  std::size_t n_items = 0;

  friend bool operator==(const AbilityEstimate&, const AbilityEstimate&) = default;
};

/// Log-likelihood over the grid nodes, accumulated in 64.64 fixed point.
///
/// Integer addition is associative, so the result is bit-identical for any
/// response order, and an incremental session update agrees exactly with
/// a from-scratch recomputation.
class PosteriorAccumulator {
 public:
  explicit PosteriorAccumulator(const QuadratureGrid& grid);

  void add(const ItemParameters& item, int score);

  /// Add precomputed per-node log-probabilities of one response
  /// (must come from log_response_probability for the same grid).
  void add_log_terms(std::span<const double> log_terms);

  std::size_t count() const noexcept { return count_; }
  std::vector<double> posterior() const;
  AbilityEstimate estimate() const;

 private:
  __extension__ using Fixed = __int128;

  const QuadratureGrid* grid_;
  std::vector<Fixed> log_likelihood_;
  std::size_t count_ = 0;
};

/// Per-item log-probabilities on a grid, computed once per (bank, grid).
class LogLikelihoodTable {
 public:
  LogLikelihoodTable(const ItemBank& bank, const QuadratureGrid& grid);

  std::span<const double> terms(std::size_t item_index, int score) const;

  /// True when built on a grid with exactly these nodes.
  bool matches(const QuadratureGrid& grid) const;

 private:
  std::vector<double> points_;
  std::size_t nodes_;
  std::vector<double> table_;  // [item][score][node]
};

/// Normalized posterior over the grid nodes. Equals the prior weights for no responses.
std::vector<double> posterior(std::span<const ResponseRecord> responses, const QuadratureGrid& grid);

/// Expected a posteriori estimate and posterior SD.
AbilityEstimate eap_estimate(std::span<const ResponseRecord> responses, const QuadratureGrid& grid);

/// reliability = 1 - se^2.
double reliability_from_se(double se);

/// Inverse of reliability_from_se; requires 0 <= r < 1.
double se_for_reliability(double reliability);

}  // namespace irtcat
