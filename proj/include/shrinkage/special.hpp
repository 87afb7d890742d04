#pragma once

#include <cstdint>
#include <vector>

namespace shrinkage::special {

// log(e^a + e^b), tolerant of -inf.
double log_sum_exp(double a, double b);
double log_sum_exp(const std::vector<double>& v);

// log(e^a - e^b) for a >= b; returns -inf when a == b.
double log_diff_exp(double a, double b);

// sqrt(pi) * e^x * erfc(sqrt(x)) for x >= 0, no overflow for large x.
// Continued fraction for x >= 4, series below.
double erfc_scaled(double x);

// Regularized incomplete gamma on the log scale:
//   log_gamma_p(a,x) = log P(a,x) = log[ gamma(a,x)/Gamma(a) ]   (lower)
//   log_gamma_q(a,x) = log Q(a,x) = log[ Gamma(a,x)/Gamma(a) ]   (upper)
// Accurate for probabilities far below DBL_MIN.
double log_gamma_p(double a, double x);
double log_gamma_q(double a, double x);

// log P(chi^2_dof <= x); exact central chi-square CDF in log space.
double log_chi2_cdf(double dof, double x);

// log P(chi^2_dof(nc) <= x) via the Poisson mixture of central CDFs.
double log_noncentral_chi2_cdf(double dof, double x, double noncentrality);

double normal_cdf(double z);
double log_normal_cdf(double z);  // stable far into the left tail

double log_choose(std::int64_t n, std::int64_t k);

}  // namespace shrinkage::special
