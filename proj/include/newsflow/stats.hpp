#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace newsflow::stats {

double mean(std::span<const double> x);
/// Sample standard deviation with the n-1 denominator.
double sample_sd(std::span<const double> x);
/// Empirical quantile with linear interpolation between order statistics
/// (position (n-1)p). The input need not be sorted.
double quantile(std::span<const double> x, double p);
double quantile_sorted(std::span<const double> sorted, double p);
/// Pearson correlation; NaN if either series is constant.
double pearson(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);
double normal_quantile(double p);
/// Two-sided p-value of a t statistic with `df` degrees of freedom.
double t_two_sided_p(double t, double df);

/// Deterministic sub-seed for stream `index` of a master seed (SplitMix64 mix).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace newsflow::stats
