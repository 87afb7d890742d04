#pragma once

#include <cstdint>
#include <string>

#include "shrinkage/priors.hpp"
#include "shrinkage/rng.hpp"

namespace shrinkage {

struct ConcentrationQuery {
  PriorSpec spec;
  SparseTruth theta0;  // empty support = centered ball
  double radius;       // > 0
};

struct ConcentrationEstimate {
  double log_prob;
  double ci_low;
  double ci_high;
  std::string method;  // monte_carlo | quadrature | chi_square_exact
  std::int64_t n_samples = 0;
  bool zero_hits = false;
};

enum class Estimator { monte_carlo, quadrature, chi_square_exact };

// Hit-fraction estimate of P(||theta - theta0|| < t) with a Wilson CI reported
// on the log scale. The stream is taken by value: calling twice with the same
// stream replays the same draws (common random numbers across radii). Chunk
// substreams are fixed, so the result is identical for any worker count.
ConcentrationEstimate concentration_mc(const ConcentrationQuery& q, std::int64_t n_samples,
                                       RngStream rng, int workers = 1,
                                       double confidence = 0.99);

// Exact centered probability P(||theta||_2 <= t) under GlobalOnly{tau_prior}
// by 1-d log-space quadrature over tau; for theta0_norm > 0 returns the
// Anderson sandwich bounds in (ci_low, ci_high) with log_prob their midpoint.
ConcentrationEstimate concentration_global_quadrature(const TauPrior& tau_prior, int n,
                                                      double theta0_norm, double t,
                                                      double rel_tol = 1e-9);

// Fixed-variance Gaussian case: exact (non)central chi-square evaluation.
ConcentrationEstimate concentration_chi_square(double variance, int n, double theta0_norm,
                                               double t);

// Dispatch by estimator tag; MC options are ignored for exact paths.
ConcentrationEstimate estimate_concentration(const ConcentrationQuery& q, Estimator est,
                                             std::int64_t n_samples, RngStream rng,
                                             int workers = 1);

// log P(<t) - log P(<r) + r^2. For sandwich or zero-hit estimates the value is
// assembled from the conservative sides (numerator upper, denominator lower),
// making it an upper bound on the true diagnostic.
double posterior_lb_ratio(const ConcentrationQuery& q, double t, double r, Estimator estimator,
                          std::int64_t n_samples = 200000, int workers = 1,
                          RngStream rng = RngStream(0, 0));

}  // namespace shrinkage
