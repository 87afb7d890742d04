#pragma once

#include <vector>

#include "shrinkage/rng.hpp"

namespace shrinkage {

// Three-parameter generalized inverse Gaussian with kernel
//   f(y) ∝ y^{lambda-1} exp{-(rho*y + chi/y)/2},  y > 0.
struct GigParams {
  double lambda;
  double rho;  // > 0
  double chi;  // >= 0; chi == 0 requires lambda > 0
};

// Symmetric density on the real line, f(x) = beta^alpha/(2*Gamma(alpha)) |x|^{alpha-1} e^{-beta|x|}.
struct WrappedGammaParams {
  double alpha;  // > 0
  double beta;   // > 0
};

void validate(const GigParams& p);

double sample_gig(const GigParams& p, RngStream& rng);

// Log of one giG draw, computed without ever forming the variate itself, so
// draws far below DBL_MIN keep their relative order (needed when normalizing
// a vector of near-degenerate draws).
double sample_gig_log(const GigParams& p, RngStream& rng);

// Normalized log density; the normalizer is evaluated by adaptive quadrature
// in log space and memoized per parameter triple.
double gig_log_density(double y, const GigParams& p);

// Inverse Gaussian iG(mu, lam): transformation-with-root-selection sampler.
double sample_inverse_gaussian(double mu, double lam, RngStream& rng);

// Normalized-gamma Dirichlet draw; log-space gamma draws keep tiny alphas from
// underflowing. Output sums to 1 within 1e-12.
std::vector<double> sample_dirichlet(const std::vector<double>& alphas, RngStream& rng);

// Double exponential (Laplace) with density (2*scale)^{-1} e^{-|x|/scale}.
double sample_double_exponential(double scale, RngStream& rng);

double wrapped_gamma_log_density(double x, const WrappedGammaParams& p);

double sample_wrapped_gamma(const WrappedGammaParams& p, RngStream& rng);

// Half-Cauchy with unit scale (density 2/(pi(1+x^2)) on x > 0).
double sample_half_cauchy(RngStream& rng);

// Inverse gamma with density beta^alpha/Gamma(alpha) x^{-alpha-1} e^{-beta/x}.
double sample_inverse_gamma(double shape, double scale, RngStream& rng);

namespace detail {
// General log-concave rejection path for the GIG, exposed so the lambda = -1/2
// inverse-Gaussian shortcut can be cross-validated against it.
double sample_gig_rejection(const GigParams& p, RngStream& rng);
}  // namespace detail

}  // namespace shrinkage
