#include "irtcat/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "irtcat/error.hpp"
#include "irtcat/irt.hpp"

namespace irtcat {

namespace {

constexpr double kFixedScale = 0x1.0p64;

}  // namespace

QuadratureGrid::QuadratureGrid(std::vector<double> points, std::vector<double> prior_weights)
    : points_(std::move(points)), weights_(std::move(prior_weights)) {
  if (points_.size() < 2) throw std::invalid_argument("quadrature grid needs at least two nodes");
  if (points_.size() != weights_.size()) {
    throw std::invalid_argument("quadrature grid: point and weight counts differ");
  }
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k]) || (k > 0 && !(points_[k] > points_[k - 1]))) {
      throw std::invalid_argument("quadrature grid points must be finite and strictly increasing");
    }
    if (!std::isfinite(weights_[k]) || !(weights_[k] > 0.0)) {
      throw std::invalid_argument("quadrature grid weights must be positive");
    }
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  log_weights_.resize(weights_.size());
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    weights_[k] /= total;
    log_weights_[k] = std::log(weights_[k]);
  }
}

QuadratureGrid QuadratureGrid::standard_normal(std::size_t n, double lo, double hi) {
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("standard_normal grid: need n >= 2 and hi > lo");
  const double step = (hi - lo) / static_cast<double>(n - 1);
  const double center = 0.5 * (lo + hi);
  const double mid = 0.5 * static_cast<double>(n - 1);
  std::vector<double> points(n);
  std::vector<double> weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Offsets from the centre keep a symmetric interval exactly symmetric.
    points[k] = center + (static_cast<double>(k) - mid) * step;
    weights[k] = std::exp(-0.5 * points[k] * points[k]);
  }
  return QuadratureGrid(std::move(points), std::move(weights));
}

QuadratureGrid default_grid() { return QuadratureGrid::standard_normal(121, -4.0, 4.0); }

PosteriorAccumulator::PosteriorAccumulator(const QuadratureGrid& grid)
    : grid_(&grid), log_likelihood_(grid.size(), 0) {}

void PosteriorAccumulator::add(const ItemParameters& item, int score) {
  if (score != 0 && score != 1) throw std::invalid_argument("response score must be 0 or 1");
  const auto points = grid_->points();
  for (std::size_t k = 0; k < points.size(); ++k) {
    log_likelihood_[k] += static_cast<Fixed>(log_response_probability(item, points[k], score) * kFixedScale);
  }
  ++count_;
}

void PosteriorAccumulator::add_log_terms(std::span<const double> log_terms) {
  if (log_terms.size() != log_likelihood_.size()) {
    throw std::invalid_argument("log-term count does not match the grid");
  }
  for (std::size_t k = 0; k < log_terms.size(); ++k) {
    log_likelihood_[k] += static_cast<Fixed>(log_terms[k] * kFixedScale);
  }
  ++count_;
}

std::vector<double> PosteriorAccumulator::posterior() const {
  const auto prior = grid_->prior_weights();
  if (count_ == 0) return {prior.begin(), prior.end()};
  const auto log_prior = grid_->log_prior_weights();
  std::vector<double> post(log_likelihood_.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < post.size(); ++k) {
    post[k] = static_cast<double>(log_likelihood_[k]) / kFixedScale + log_prior[k];
    peak = std::max(peak, post[k]);
  }
  double mass = 0.0;
  for (double& value : post) {
    value = std::exp(value - peak);
    mass += value;
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InternalError("posterior has no finite mass");
  for (double& value : post) value /= mass;
  return post;
}

AbilityEstimate PosteriorAccumulator::estimate() const {
  const auto post = posterior();
  const auto points = grid_->points();
  double mean = 0.0;
  for (std::size_t k = 0; k < post.size(); ++k) mean += points[k] * post[k];
  double variance = 0.0;
  for (std::size_t k = 0; k < post.size(); ++k) {
    const double d = points[k] - mean;
    variance += d * d * post[k];
  }
  return {mean, std::sqrt(variance), count_};
}

LogLikelihoodTable::LogLikelihoodTable(const ItemBank& bank, const QuadratureGrid& grid)
    : points_(grid.points().begin(), grid.points().end()),
      nodes_(grid.size()),
      table_(bank.size() * 2 * grid.size()) {
  const auto points = grid.points();
  for (std::size_t i = 0; i < bank.size(); ++i) {
    for (int score = 0; score <= 1; ++score) {
      double* row = table_.data() + (i * 2 + static_cast<std::size_t>(score)) * nodes_;
      for (std::size_t k = 0; k < nodes_; ++k) row[k] = log_response_probability(bank[i], points[k], score);
    }
  }
}

std::span<const double> LogLikelihoodTable::terms(std::size_t item_index, int score) const {
  return {table_.data() + (item_index * 2 + static_cast<std::size_t>(score != 0)) * nodes_, nodes_};
}

bool LogLikelihoodTable::matches(const QuadratureGrid& grid) const {
  return std::equal(points_.begin(), points_.end(), grid.points().begin(), grid.points().end());
}

std::vector<double> posterior(std::span<const ResponseRecord> responses, const QuadratureGrid& grid) {
  PosteriorAccumulator acc(grid);
  for (const auto& r : responses) acc.add(r.item.get(), r.score);
  return acc.posterior();
}

AbilityEstimate eap_estimate(std::span<const ResponseRecord> responses, const QuadratureGrid& grid) {
  PosteriorAccumulator acc(grid);
  for (const auto& r : responses) acc.add(r.item.get(), r.score);
  return acc.estimate();
}

double reliability_from_se(double se) {
  if (!(se >= 0.0)) throw std::invalid_argument("standard error must be non-negative");
  return 1.0 - se * se;
}

double se_for_reliability(double reliability) {
  if (!(reliability >= 0.0 && reliability < 1.0)) {
    throw std::invalid_argument("reliability must lie in [0, 1)");
  }
  return std::sqrt(1.0 - reliability);
}

}  // namespace irtcat
