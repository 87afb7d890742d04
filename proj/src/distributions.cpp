#include "shrinkage/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "shrinkage/quadrature.hpp"
#include "shrinkage/special.hpp"

namespace shrinkage {

namespace {

constexpr double kFloor = 1e-300;
constexpr double kCeil = 1e300;

// Log density of log Y when Y ~ giG(lambda, rho, chi); strictly concave in x.
inline double gig_log_kernel_x(double x, const GigParams& p) {
  return p.lambda * x - 0.5 * (p.rho * std::exp(x) + p.chi * std::exp(-x));
}

struct GigEnvelope {
  double xm;      // mode of the log-scale kernel
  double hm;      // kernel value at the mode
  double xl, xr;  // tangency points
  double hl, hr;  // kernel values there
  double sl, sr;  // tangent slopes (sl > 0 > sr)
  double lw_mid, lw_left, lw_right;  // log piece areas relative to hm
};

GigEnvelope build_envelope(const GigParams& p) {
  // Mode of the x-kernel solves rho*u^2 - 2*lambda*u - chi = 0, u = e^x; the
  // conjugate form keeps the small root stable when lambda < 0.
  double q = std::hypot(p.lambda, std::sqrt(p.rho) * std::sqrt(p.chi));
  GigEnvelope e;
  e.xm = (p.lambda >= 0.0) ? std::log(p.lambda + q) - std::log(p.rho)
                           : std::log(p.chi) - std::log(q - p.lambda);
  // At the mode rho*u + chi/u = 2q, so hm = lambda*xm - q and the curvature of
  // the kernel there is exactly q.
  e.hm = p.lambda * e.xm - q;
  double delta = std::sqrt(1.0 / q);
  e.xl = e.xm - delta;
  e.xr = e.xm + delta;
  e.hl = gig_log_kernel_x(e.xl, p);
  e.hr = gig_log_kernel_x(e.xr, p);
  e.sl = p.lambda - 0.5 * (p.rho * std::exp(e.xl) - p.chi * std::exp(-e.xl));
  e.sr = p.lambda - 0.5 * (p.rho * std::exp(e.xr) - p.chi * std::exp(-e.xr));
  e.lw_mid = std::log(e.xr - e.xl);
  e.lw_left = (e.hl - e.hm) - std::log(e.sl);
  e.lw_right = (e.hr - e.hm) - std::log(-e.sr);
  return e;
}

std::map<std::tuple<double, double, double>, double> g_gig_norm_cache;
std::mutex g_gig_norm_mutex;

double gig_log_normalizer(const GigParams& p) {
  auto key = std::make_tuple(p.lambda, p.rho, p.chi);
  {
    std::lock_guard<std::mutex> lock(g_gig_norm_mutex);
    auto it = g_gig_norm_cache.find(key);
    if (it != g_gig_norm_cache.end()) return it->second;
  }
  double q = std::hypot(p.lambda, std::sqrt(p.rho) * std::sqrt(p.chi));
  double xm = (p.lambda >= 0.0) ? std::log(p.lambda + q) - std::log(p.rho)
                                : std::log(p.chi) - std::log(q - p.lambda);
  double step = std::max(0.25, 1.0 / std::sqrt(q));
  double lz = quad::log_integrate_peaked([&p](double x) { return gig_log_kernel_x(x, p); }, xm,
                                         step, 1e-11);
  std::lock_guard<std::mutex> lock(g_gig_norm_mutex);
  g_gig_norm_cache.emplace(key, lz);
  return lz;
}

double gig_rejection_log_x(const GigParams& p, RngStream& rng) {
  GigEnvelope e = build_envelope(p);
  double pm = std::exp(e.lw_mid), pl = std::exp(e.lw_left), pr = std::exp(e.lw_right);
  double total = pm + pl + pr;
  for (int iter = 0; iter < 10000; ++iter) {
    double u = rng.uniform() * total;
    double x, hat;
    if (u < pm) {
      x = e.xl + rng.uniform() * (e.xr - e.xl);
      hat = e.hm;
    } else if (u < pm + pl) {
      x = e.xl + std::log(rng.uniform()) / e.sl;
      hat = e.hl + e.sl * (x - e.xl);
    } else {
      x = e.xr + std::log(rng.uniform()) / e.sr;
      hat = e.hr + e.sr * (x - e.xr);
    }
    double h = gig_log_kernel_x(x, p);
    if (std::log(rng.uniform()) <= h - hat) return x;
  }
  throw std::runtime_error("sample_gig: rejection sampler failed to accept");
}

// Log-space Michael-Schucany-Haas; same draw layout as sample_inverse_gaussian.
double inverse_gaussian_log_x(double mu, double lam, RngStream& rng) {
  double z = rng.normal();
  double nu = z * z;
  double w = mu * nu / lam;
  double log_small;
  if (w > 1e300) {
    log_small = std::log(lam) - std::log(nu);
  } else {
    log_small = std::log(mu) - std::log(1.0 + 0.5 * w + std::sqrt(w) * std::sqrt(1.0 + 0.25 * w));
  }
  double u = rng.uniform();
  double ratio = std::exp(log_small - std::log(mu));  // x/mu, in (0, 1]
  if (u * (1.0 + ratio) <= 1.0) return log_small;
  return 2.0 * std::log(mu) - log_small;
}

}  // namespace

void validate(const GigParams& p) {
  if (!std::isfinite(p.lambda) || !std::isfinite(p.rho) || !std::isfinite(p.chi) ||
      !(p.rho > 0.0) || p.chi < 0.0 || (p.chi == 0.0 && p.lambda <= 0.0))
    throw std::invalid_argument("GigParams: need rho > 0, chi >= 0, and lambda > 0 when chi = 0");
}

namespace detail {

double sample_gig_rejection(const GigParams& p, RngStream& rng) {
  return std::clamp(std::exp(gig_rejection_log_x(p, rng)), kFloor, kCeil);
}

}  // namespace detail

double sample_gig(const GigParams& p, RngStream& rng) {
  validate(p);
  if (p.chi == 0.0) return std::clamp(rng.gamma(p.lambda, 0.5 * p.rho), kFloor, kCeil);
  if (p.lambda == -0.5) {
    // giG(-1/2, rho, chi) is iG(sqrt(chi/rho), chi).
    return std::clamp(sample_inverse_gaussian(std::sqrt(p.chi / p.rho), p.chi, rng), kFloor, kCeil);
  }
  return detail::sample_gig_rejection(p, rng);
}

double sample_gig_log(const GigParams& p, RngStream& rng) {
  validate(p);
  if (p.chi == 0.0) return rng.log_gamma_draw(p.lambda) - std::log(0.5 * p.rho);
  if (p.lambda == -0.5) return inverse_gaussian_log_x(std::sqrt(p.chi / p.rho), p.chi, rng);
  return gig_rejection_log_x(p, rng);
}

double gig_log_density(double y, const GigParams& p) {
  validate(p);
  if (!(y > 0.0) || !std::isfinite(y)) throw std::domain_error("gig_log_density: y must be positive");
  return (p.lambda - 1.0) * std::log(y) - 0.5 * (p.rho * y + p.chi / y) - gig_log_normalizer(p);
}

double sample_inverse_gaussian(double mu, double lam, RngStream& rng) {
  if (!(mu > 0.0) || !(lam > 0.0) || !std::isfinite(mu) || !std::isfinite(lam))
    throw std::invalid_argument("sample_inverse_gaussian: mu, lam must be positive");
  double z = rng.normal();
  double nu = z * z;
  double w = mu * nu / lam;
  // Smaller quadratic root written product-over-sum so it never cancels;
  // for enormous w it limits to lam/nu.
  double x;
  if (w > 1e300) {
    x = lam / nu;
  } else {
    x = mu / (1.0 + 0.5 * w + std::sqrt(w) * std::sqrt(1.0 + 0.25 * w));
  }
  double u = rng.uniform();
  if (u * (mu + x) <= mu) return x;
  double big = mu / x * mu;  // mu^2/x without premature overflow
  return std::isfinite(big) ? big : kCeil;
}

std::vector<double> sample_dirichlet(const std::vector<double>& alphas, RngStream& rng) {
  if (alphas.empty()) throw std::invalid_argument("sample_dirichlet: empty alpha vector");
  for (double a : alphas)
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument("sample_dirichlet: alphas must be positive");
  std::size_t n = alphas.size();
  std::vector<double> lg(n);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    lg[j] = rng.log_gamma_draw(alphas[j]);
    m = std::max(m, lg[j]);
  }
  std::vector<double> out(n);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = std::exp(lg[j] - m);
    s += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] = std::max(out[j] / s, kFloor);
  return out;
}

double sample_double_exponential(double scale, RngStream& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("sample_double_exponential: scale must be positive");
  double sign = (rng.uniform() < 0.5) ? -1.0 : 1.0;
  return -sign * scale * std::log(rng.uniform());
}

double wrapped_gamma_log_density(double x, const WrappedGammaParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0))
    throw std::invalid_argument("wrapped_gamma_log_density: parameters must be positive");
  double ax = std::fabs(x);
  if (ax == 0.0 && p.alpha < 1.0) return std::numeric_limits<double>::infinity();
  return p.alpha * std::log(p.beta) - std::log(2.0) - std::lgamma(p.alpha) +
         (p.alpha - 1.0) * std::log(ax) - p.beta * ax;
}

double sample_wrapped_gamma(const WrappedGammaParams& p, RngStream& rng) {
  double sign = (rng.uniform() < 0.5) ? -1.0 : 1.0;
  return sign * rng.gamma(p.alpha, p.beta);
}

double sample_half_cauchy(RngStream& rng) {
  return std::fabs(std::tan(3.141592653589793238463 * (rng.uniform() - 0.5)));
}

double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("sample_inverse_gamma: parameters must be positive");
  return std::clamp(1.0 / rng.gamma(shape, scale), kFloor, kCeil);
}

}  // namespace shrinkage
