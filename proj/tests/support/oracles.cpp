#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "irtcat/irt.hpp"

namespace irtcat::oracle {

long double log_posterior(const std::vector<Response>& responses, long double theta) {
  long double total = -0.5L * theta * theta;
  for (const auto& r : responses) {
    const long double z = static_cast<long double>(r.a) * (theta - static_cast<long double>(r.b));
    // log p = -log(1 + e^-z), log(1 - p) = -log(1 + e^z)
    const long double s = r.score == 1 ? z : -z;
    total -= s > 0 ? std::log1p(std::exp(-s)) : -s + std::log1p(std::exp(s));
  }
  return total;
}

Eap fine_grid_eap(const std::vector<Response>& responses, std::size_t points, long double lo, long double hi) {
  if (points < 3 || points % 2 == 0) throw std::invalid_argument("Simpson needs an odd number of points");
  const long double h = (hi - lo) / static_cast<long double>(points - 1);
  std::vector<long double> logs(points);
  long double peak = -INFINITY;
  for (std::size_t k = 0; k < points; ++k) {
    logs[k] = log_posterior(responses, lo + h * static_cast<long double>(k));
    if (logs[k] > peak) peak = logs[k];
  }
  long double m0 = 0.0L;
  long double m1 = 0.0L;
  long double m2 = 0.0L;
  for (std::size_t k = 0; k < points; ++k) {
    const long double w = (k == 0 || k == points - 1) ? 1.0L : (k % 2 == 1 ? 4.0L : 2.0L);
    const long double t = lo + h * static_cast<long double>(k);
    const long double f = w * std::exp(logs[k] - peak);
    m0 += f;
    m1 += f * t;
    m2 += f * t * t;
  }
  const long double mean = m1 / m0;
  return {mean, std::sqrt(m2 / m0 - mean * mean)};
}

long double information(long double a, long double b, long double theta) {
  const long double p = 1.0L / (1.0L + std::exp(-a * (theta - b)));
  return a * a * p * (1.0L - p);
}

std::size_t exhaustive_mfi(const ItemBank& bank, const std::vector<bool>& used, double theta) {
  std::size_t best = bank.size();
  double best_info = 0.0;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (used[i]) continue;
    const double info = item_information(bank[i], theta);
    if (best == bank.size() || info > best_info) {
      best = i;
      best_info = info;
    }
  }
  return best;
}

std::vector<double> brute_force_ranks(const std::vector<double>& x) {
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double below = 0;
    double equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] < x[i]) below += 1;
      if (j != i && x[j] == x[i]) equal += 1;
    }
    ranks[i] = 1.0 + below + equal / 2.0;
  }
  return ranks;
}

long double two_pass_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0.0L;
  long double my = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0.0L;
  long double sxx = 0.0L;
  long double syy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace irtcat::oracle
