#include "shrinkage/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shrinkage::special {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSqrtPi = 1.772453850905516027298167;
}  // namespace

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf || std::isinf(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_diff_exp(double a, double b) {
  if (b == kNegInf) return a;
  if (a < b) throw std::domain_error("log_diff_exp: a < b");
  if (a == b) return kNegInf;
  return a + std::log(-std::expm1(b - a));
}

double erfc_scaled(double x) {
  if (!(x >= 0.0)) throw std::domain_error("erfc_scaled: x must be nonnegative");
  double t = std::sqrt(x);
  if (x >= 4.0) {
    // Laplace continued fraction sqrt(pi) e^{t^2} erfc(t) = 1/(t+ (1/2)/(t+ 1/(t+ (3/2)/(t+ ...))))
    // evaluated by modified Lentz.
    const double tiny = 1e-300;
    double f = t, c = t, d = 0.0;
    for (int k = 1; k <= 300; ++k) {
      double ak = 0.5 * k;
      d = t + ak * d;
      if (d == 0.0) d = tiny;
      c = t + ak / c;
      if (c == 0.0) c = tiny;
      d = 1.0 / d;
      double delta = c * d;
      f *= delta;
      if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return 1.0 / f;
  }
  // erf(t) = (2t/sqrt(pi)) e^{-t^2} sum_k (2t^2)^k/(2k+1)!!  (all-positive series), so
  // sqrt(pi) e^x erfc(sqrt(x)) = sqrt(pi) e^x - 2 sqrt(x) S(x).
  double term = 1.0, s = 1.0;
  for (int k = 1; k <= 200; ++k) {
    term *= 2.0 * x / (2.0 * k + 1.0);
    s += term;
    if (term < s * 1e-18) break;
  }
  return kSqrtPi * std::exp(x) - 2.0 * t * s;
}

namespace {

// log of sum_{k>=0} prod_{i=1..k} x/(a+i); the series factor of P(a,x). Valid x < a+1 or so.
double log_p_series(double a, double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
}

// log of the continued-fraction form of Q(a,x); valid x >= a+1.
double log_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return a * std::log(x) - x - std::lgamma(a) + std::log(h);
}

}  // namespace

double log_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x))
    throw std::domain_error("log_gamma_p: need a > 0, x >= 0 finite");
  if (x == 0.0) return kNegInf;
  if (x < a + 1.0) return log_p_series(a, x);
  double lq = log_q_cf(a, x);
  // Q <= ~0.5 here, so 1-Q is well conditioned.
  return std::log(-std::expm1(lq));
}

double log_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x))
    throw std::domain_error("log_gamma_q: need a > 0, x >= 0 finite");
  if (x == 0.0) return 0.0;
  if (x >= a + 1.0) return log_q_cf(a, x);
  double lp = log_p_series(a, x);
  return std::log(-std::expm1(lp));
}

double log_chi2_cdf(double dof, double x) {
  if (!(dof > 0.0)) throw std::domain_error("log_chi2_cdf: dof must be positive");
  if (x <= 0.0) return kNegInf;
  return log_gamma_p(0.5 * dof, 0.5 * x);
}

double log_noncentral_chi2_cdf(double dof, double x, double noncentrality) {
  if (!(dof > 0.0) || noncentrality < 0.0)
    throw std::domain_error("log_noncentral_chi2_cdf: bad parameters");
  if (x <= 0.0) return kNegInf;
  if (noncentrality == 0.0) return log_chi2_cdf(dof, x);
  double half = 0.5 * noncentrality;
  double log_half = std::log(half);
  double best = kNegInf, acc_m = kNegInf, acc_s = 0.0;
  long kmax = static_cast<long>(half + 12.0 * std::sqrt(half + 1.0) + 50.0);
  for (long k = 0; k <= kmax; ++k) {
    double lw = -half + k * log_half - std::lgamma(k + 1.0);
    double term = lw + log_gamma_p(0.5 * dof + k, 0.5 * x);
    best = std::max(best, term);
    if (term > acc_m) {
      acc_s = acc_s * std::exp(acc_m - term) + 1.0;
      acc_m = term;
    } else {
      acc_s += std::exp(term - acc_m);
    }
    if (k > half && term < best - 45.0) break;
  }
  return acc_m + std::log(acc_s);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244008444); }

double log_normal_cdf(double z) {
  double h = 0.5 * z * z;
  if (z >= 0.0) {
    double e = std::exp(-h) * erfc_scaled(h) / kSqrtPi;  // erfc(z/sqrt(2)) without tail loss
    return std::log1p(-0.5 * e);
  }
  return std::log(0.5 / kSqrtPi) - h + std::log(erfc_scaled(h));
}

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) throw std::domain_error("log_choose: need 0 <= k <= n");
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace shrinkage::special
