#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace shrinkage::stats {

struct KsResult {
  double statistic;
  double p_value;
};

// One-sample KS against a supplied CDF (asymptotic p-value, fine for m >= 100).
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct WilsonInterval {
  double low;
  double high;
};

// Wilson score interval for a binomial proportion at normal quantile z.
WilsonInterval wilson_interval(std::int64_t hits, std::int64_t trials, double z);

// Inverse standard normal CDF (Acklam's rational approximation, ~1e-9 relative).
double normal_quantile(double p);

}  // namespace shrinkage::stats
