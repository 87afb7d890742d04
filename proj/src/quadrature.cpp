#include "shrinkage/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shrinkage::quad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 15-point Kronrod abscissas (nonnegative half) and weights on [-1,1].
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

double panel_sum(const std::function<double(double)>& f, double lo, double hi) {
  double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
  double s = kWeights[7] * f(mid);
  for (int i = 0; i < 7; ++i) {
    double d = hw * kNodes[i];
    s += kWeights[i] * (f(mid - d) + f(mid + d));
  }
  return s * hw;
}

// Streaming log-sum-exp accumulator.
struct LogAcc {
  double m = kNegInf, s = 0.0;
  void add(double v) {
    if (v == kNegInf) return;
    if (v <= m) {
      s += std::exp(v - m);
    } else {
      s = s * std::exp(m - v) + 1.0;
      m = v;
    }
  }
  double value() const { return (m == kNegInf) ? kNegInf : m + std::log(s); }
};

double log_panel_pass(const std::function<double(double)>& logf, double a, double b, int panels) {
  LogAcc acc;
  double width = (b - a) / panels;
  double log_hw = std::log(0.5 * width);
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * width, hi = lo + width;
    double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
    acc.add(std::log(kWeights[7]) + logf(mid) + log_hw);
    for (int i = 0; i < 7; ++i) {
      double d = hw * kNodes[i];
      double lw = std::log(kWeights[i]) + log_hw;
      acc.add(lw + logf(mid - d));
      acc.add(lw + logf(mid + d));
    }
  }
  return acc.value();
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(a < b)) {
    if (a == b) return 0.0;
    throw std::invalid_argument("integrate: need a <= b");
  }
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int panels = 16; panels <= 16384; panels *= 2) {
    double width = (b - a) / panels;
    double cur = 0.0;
    for (int p = 0; p < panels; ++p) cur += panel_sum(f, a + p * width, a + (p + 1) * width);
    if (std::isfinite(prev) && std::fabs(cur - prev) <= rel_tol * std::fabs(cur) + 1e-300)
      return cur;
    prev = cur;
  }
  return prev;
}

double log_integrate(const std::function<double(double)>& logf, double a, double b,
                     double rel_tol) {
  if (!(a < b)) {
    if (a == b) return kNegInf;
    throw std::invalid_argument("log_integrate: need a <= b");
  }
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int panels = 16; panels <= 16384; panels *= 2) {
    double cur = log_panel_pass(logf, a, b, panels);
    if (cur == kNegInf) return kNegInf;
    if (std::isfinite(prev) && std::fabs(cur - prev) <= rel_tol) return cur;
    prev = cur;
  }
  return prev;
}

double log_integrate_peaked(const std::function<double(double)>& logf, double center, double step,
                            double rel_tol, double drop) {
  if (!(step > 0.0)) throw std::invalid_argument("log_integrate_peaked: step must be positive");
  double peak = logf(center);
  double lo = center, hi = center;
  double w = step;
  for (int i = 0; i < 200; ++i) {
    hi = hi + w;
    double v = logf(hi);
    peak = std::max(peak, v);
    if (v < peak - drop) break;
    w *= 1.5;
  }
  w = step;
  for (int i = 0; i < 200; ++i) {
    lo = lo - w;
    double v = logf(lo);
    peak = std::max(peak, v);
    if (v < peak - drop) break;
    w *= 1.5;
  }
  return log_integrate(logf, lo, hi, rel_tol);
}

}  // namespace shrinkage::quad
