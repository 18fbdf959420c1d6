#pragma once

#include <span>
#include <utility>
#include <vector>

namespace seuler {

/// Linear-interpolation quantile (type 7) of unsorted data; q in [0, 1].
double quantile(std::span<const double> data, double q);

/// Wilson score interval for k successes in n trials at z (1.96 → 95%).
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials,
                                          double z = 1.959963984540054);

/// Pairwise (cascade) summation in index order; reproducible for a fixed input order.
double pairwise_sum(std::span<const double> data);

double mean(std::span<const double> data);

}  // namespace seuler
