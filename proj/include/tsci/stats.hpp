#pragma once

#include <vector>

namespace tsci {

// Standard normal CDF.
double normal_cdf(double x);

// Two-sided p value for a z statistic, 2 * (1 - Phi(|z|)).
double two_sided_p(double z);

// Standard normal quantile, p in (0, 1).
double normal_quantile(double p);

// Sample median (mean of the two middle order statistics for even n).
double median(std::vector<double> values);

// Type-7 sample quantile (the R default): linear interpolation between
// order statistics. p in [0, 1].
double quantile_type7(std::vector<double> values, double p);

double mean(const std::vector<double>& values);

// Sample standard deviation with the n-1 denominator; 0 for n < 2.
double sample_sd(const std::vector<double>& values);

}  // namespace tsci
