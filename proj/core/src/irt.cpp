#include "irtcat/irt.hpp"

#include <algorithm>
#include <cmath>

namespace irtcat {

double logistic(double z) noexcept {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double prob_correct(double discrimination, double difficulty, double theta) noexcept {
  return logistic(discrimination * (theta - difficulty));
}

double prob_correct(const ItemParameters& item, double theta) noexcept {
  return prob_correct(item.discrimination, item.difficulty, theta);
}

double item_information(double discrimination, double difficulty, double theta) noexcept {
  // p(1-p) = e / (1 + e)^2 with e = exp(-|z|); symmetric in z and never overflows.
  const double z = discrimination * (theta - difficulty);
  const double e = std::exp(-std::abs(z));
  const double denom = 1.0 + e;
  return discrimination * discrimination * e / (denom * denom);
}

double item_information(const ItemParameters& item, double theta) noexcept {
  return item_information(item.discrimination, item.difficulty, theta);
}

double test_information(std::span<const ItemParameters> items, double theta) noexcept {
  double total = 0.0;
  for (const auto& item : items) total += item_information(item, theta);
  return total;
}

double log_response_probability(const ItemParameters& item, double theta, int score) noexcept {
  const double z = item.discrimination * (theta - item.difficulty);
  // P(score) = logistic(+z) for a correct answer, logistic(-z) otherwise.
  const double p = logistic(score == 1 ? z : -z);
  return std::log(std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor));
}

}  // namespace irtcat
