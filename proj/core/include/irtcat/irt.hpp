#pragma once

#include <span>

#include "irtcat/item_bank.hpp"

namespace irtcat {

/// Smallest probability handed to a logarithm; keeps posteriors finite.
inline constexpr double kProbabilityFloor = 1e-15;

/// Logistic function 1 / (1 + exp(-z)) in a form that cannot overflow.
double logistic(double z) noexcept;

/// 2PL probability of a correct response.
double prob_correct(double discrimination, double difficulty, double theta) noexcept;
double prob_correct(const ItemParameters& item, double theta) noexcept;

/// Fisher information a^2 * p * (1 - p) of one item at theta.
double item_information(double discrimination, double difficulty, double theta) noexcept;
double item_information(const ItemParameters& item, double theta) noexcept;

/// Sum of item information; 0 for an empty set.
double test_information(std::span<const ItemParameters> items, double theta) noexcept;

/// Log-probability of `score` (0 or 1) with p clamped to [floor, 1 - floor].
double log_response_probability(const ItemParameters& item, double theta, int score) noexcept;

}  // namespace irtcat
