#include "seuler/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seuler {

double quantile(std::span<const double> data, double q) {
  if (data.empty()) throw std::invalid_argument("quantile of empty data");
  std::vector<double> v(data.begin(), data.end());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double pairwise_sum(std::span<const double> data) {
  if (data.size() <= 8) {
    double s = 0.0;
    for (double x : data) s += x;
    return s;
  }
  const std::size_t mid = data.size() / 2;
  return pairwise_sum(data.first(mid)) + pairwise_sum(data.subspan(mid));
}

double mean(std::span<const double> data) {
  return data.empty() ? 0.0 : pairwise_sum(data) / static_cast<double>(data.size());
}

}  // namespace seuler
