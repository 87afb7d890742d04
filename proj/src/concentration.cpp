#include "shrinkage/concentration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "shrinkage/quadrature.hpp"
#include "shrinkage/special.hpp"
#include "shrinkage/stats.hpp"

namespace shrinkage {

using special::log_chi2_cdf;
using special::log_noncentral_chi2_cdf;
using stats::normal_quantile;
using stats::wilson_interval;
using stats::WilsonInterval;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kChunk = 65536;

void validate_query(const ConcentrationQuery& q) {
  validate(q.spec);
  if (!(q.radius >= 0.0) || !std::isfinite(q.radius)) {
    throw std::invalid_argument("concentration: radius must be finite and >= 0");
  }
  if (q.theta0.n <= 0) throw std::invalid_argument("concentration: theta0.n must be positive");
  if (q.theta0.support.size() != q.theta0.values.size()) {
    throw std::invalid_argument("concentration: support/values length mismatch");
  }
}

std::int64_t count_hits(const ConcentrationQuery& q, const std::vector<double>& center,
                        std::int64_t n_draws, RngStream rng) {
  const double t2 = q.radius * q.radius;
  const int n = q.theta0.n;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n_draws; ++i) {
    const std::vector<double> theta = sample_theta_prior(q.spec, n, rng);
    double ss = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = theta[static_cast<std::size_t>(j)] - center[static_cast<std::size_t>(j)];
      ss += d * d;
    }
    if (ss < t2) ++hits;
  }
  return hits;
}

// Peak hint for the log-tau integrand: the chi-square factor saturates once
// tau ~ w/n and the offset factor wants tau ~ b2/n.
double peak_log_tau(double w, double b2, int n) {
  const double guess = (w + b2) / static_cast<double>(n);
  return std::log(std::max(guess, 1e-12));
}

double log_tau_prior_density(const TauPrior& prior, double tau) {
  return tau_log_density(prior, tau);
}

}  // namespace

ConcentrationEstimate concentration_mc(const ConcentrationQuery& q, std::int64_t n_samples,
                                       RngStream rng, int workers, double confidence) {
  validate_query(q);
  if (n_samples <= 0) throw std::invalid_argument("concentration_mc: n_samples must be positive");
  if (workers < 1) workers = 1;
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("concentration_mc: confidence must lie in (0,1)");
  }

  const std::vector<double> center = q.theta0.dense();
  const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<std::int64_t> chunk_hits(static_cast<std::size_t>(n_chunks), 0);

  std::atomic<std::int64_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      const std::int64_t lo = c * kChunk;
      const std::int64_t len = std::min<std::int64_t>(kChunk, n_samples - lo);
      chunk_hits[static_cast<std::size_t>(c)] =
          count_hits(q, center, len, rng.split(static_cast<std::uint64_t>(c)));
    }
  };
  if (workers == 1 || n_chunks == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::int64_t hits = 0;
  for (const auto h : chunk_hits) hits += h;

  const double z = normal_quantile(0.5 + 0.5 * confidence);
  const WilsonInterval ci = wilson_interval(hits, n_samples, z);

  ConcentrationEstimate est;
  est.method = "monte_carlo";
  est.n_samples = n_samples;
  est.zero_hits = (hits == 0);
  est.log_prob = hits > 0 ? std::log(static_cast<double>(hits)) -
                                std::log(static_cast<double>(n_samples))
                          : kNegInf;
  est.ci_low = ci.low > 0.0 ? std::log(ci.low) : kNegInf;
  est.ci_high = std::log(ci.high);
  return est;
}

ConcentrationEstimate concentration_global_quadrature(const TauPrior& tau_prior, int n,
                                                      double theta0_norm, double t,
                                                      double rel_tol) {
  if (n <= 0) throw std::invalid_argument("concentration_global_quadrature: n must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("concentration_global_quadrature: bad radius");
  }
  if (!(theta0_norm >= 0.0)) {
    throw std::invalid_argument("concentration_global_quadrature: bad theta0_norm");
  }
  if (std::holds_alternative<Deterministic>(tau_prior)) {
    throw std::invalid_argument(
        "concentration_global_quadrature: deterministic tau has a closed form; use "
        "concentration_chi_square");
  }

  ConcentrationEstimate est;
  est.method = "quadrature";
  est.n_samples = 0;

  if (t == 0.0) {
    est.log_prob = est.ci_low = est.ci_high = kNegInf;
    est.zero_hits = true;
    return est;
  }

  // log integrand in x = log tau for P(chi2_n <= w e^-x), weighted by the tau
  // prior (the extra + x is the Jacobian), optionally damped by the Anderson
  // offset factor exp(-b2 / (2 tau)).
  auto log_mass = [&](double w, double b2) {
    auto logf = [&](double x) {
      const double tau = std::exp(x);
      double v = log_tau_prior_density(tau_prior, tau) + x + log_chi2_cdf(n, w * std::exp(-x));
      if (b2 > 0.0) v -= 0.5 * b2 * std::exp(-x);
      return v;
    };
    return quad::log_integrate_peaked(logf, peak_log_tau(w, b2, n), 1.0, rel_tol);
  };

  if (theta0_norm == 0.0) {
    est.log_prob = log_mass(t * t, 0.0);
    est.ci_low = est.ci_high = est.log_prob;
    return est;
  }

  // Shifted-ball sandwich: shift-damped lower bound at half the radius, and
  // the centered probability as the upper bound. Damping the upper side too
  // would understate the mass once t is comparable to the shift (n = 1,
  // tau = 1, theta0 = 1, t = 2 already violates it).
  const double b2 = theta0_norm * theta0_norm;
  est.ci_low = log_mass(0.25 * t * t, b2);
  est.ci_high = log_mass(t * t, 0.0);
  est.log_prob = 0.5 * (est.ci_low + est.ci_high);
  return est;
}

ConcentrationEstimate concentration_chi_square(double variance, int n, double theta0_norm,
                                               double t) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("concentration_chi_square: variance must be positive");
  }
  if (n <= 0) throw std::invalid_argument("concentration_chi_square: n must be positive");
  ConcentrationEstimate est;
  est.method = "chi_square_exact";
  est.n_samples = 0;
  if (t <= 0.0) {
    est.log_prob = est.ci_low = est.ci_high = kNegInf;
    est.zero_hits = true;
    return est;
  }
  const double w = t * t / variance;
  const double nc = theta0_norm * theta0_norm / variance;
  est.log_prob = nc > 0.0 ? log_noncentral_chi2_cdf(n, w, nc) : log_chi2_cdf(n, w);
  est.ci_low = est.ci_high = est.log_prob;
  return est;
}

ConcentrationEstimate estimate_concentration(const ConcentrationQuery& q, Estimator est,
                                             std::int64_t n_samples, RngStream rng, int workers) {
  validate_query(q);
  switch (est) {
    case Estimator::monte_carlo:
      return concentration_mc(q, n_samples, rng, workers);
    case Estimator::chi_square_exact: {
      const double norm = std::sqrt(q.theta0.squared_norm());
      if (const auto* iid = std::get_if<IidNormal>(&q.spec)) {
        return concentration_chi_square(iid->variance, q.theta0.n, norm, q.radius);
      }
      if (const auto* glob = std::get_if<GlobalOnly>(&q.spec)) {
        if (const auto* det = std::get_if<Deterministic>(&glob->tau_prior)) {
          return concentration_chi_square(det->tau_n, q.theta0.n, norm, q.radius);
        }
      }
      throw std::invalid_argument(
          "estimate_concentration: chi_square_exact needs a fixed-variance Gaussian prior");
    }
    case Estimator::quadrature: {
      const auto* glob = std::get_if<GlobalOnly>(&q.spec);
      if (glob == nullptr) {
        throw std::invalid_argument("estimate_concentration: quadrature needs GlobalOnly");
      }
      const double norm = std::sqrt(q.theta0.squared_norm());
      return concentration_global_quadrature(glob->tau_prior, q.theta0.n, norm, q.radius);
    }
  }
  throw std::logic_error("estimate_concentration: unknown estimator");
}

double posterior_lb_ratio(const ConcentrationQuery& q, double t, double r, Estimator estimator,
                          std::int64_t n_samples, int workers, RngStream rng) {
  if (!(t > 0.0) || !(r > 0.0)) {
    throw std::invalid_argument("posterior_lb_ratio: radii must be positive");
  }
  ConcentrationQuery qt = q;
  qt.radius = t;
  ConcentrationQuery qr = q;
  qr.radius = r;
  // Identical stream for both radii: the hit indicators are coupled, so the
  // ratio is monotone in t even at modest sample sizes.
  const ConcentrationEstimate num = estimate_concentration(qt, estimator, n_samples, rng, workers);
  const ConcentrationEstimate den = estimate_concentration(qr, estimator, n_samples, rng, workers);
  if (den.zero_hits || den.ci_low == kNegInf) {
    throw std::domain_error("posterior_lb_ratio: denominator probability indistinguishable from 0");
  }
  const bool exact = num.ci_low == num.ci_high && den.ci_low == den.ci_high;
  if (exact) return num.log_prob - den.log_prob + r * r;
  return num.ci_high - den.ci_low + r * r;
}

}  // namespace shrinkage
