#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "shrinkage/rng.hpp"

namespace shrinkage {

// Global-scale prior on the variance tau.
struct Deterministic {
  double tau_n;  // plug-in value, > 0
};
struct InverseGamma {
  double alpha;
  double beta;  // scale
};
struct ExponentialPrior {
  double rate;
};
struct HalfCauchyPrior {};

using TauPrior = std::variant<Deterministic, InverseGamma, ExponentialPrior, HalfCauchyPrior>;

// theta_j ~ N(0, variance), iid.
struct IidNormal {
  double variance;
};
// theta_j ~ N(0, tau), psi_j == 1.
struct GlobalOnly {
  TauPrior tau_prior;
};
// theta_j ~ N(0, psi_j * tau), psi_j ~ Exp(local_rate).
struct GlobalLocal {
  TauPrior tau_prior;
  double local_rate;
};
// theta_j ~ DE(phi_j * tau), phi ~ Dir(a,...,a).
struct DirichletLaplace {
  double a;  // in (0, 1]
  TauPrior tau_prior;
};
// Spike-and-slab with complexity prior on the support size; standard Laplace slab.
struct PointMassMixture {
  double kappa;
};
// theta_j ~ N(0, psi_j * tau), psi_j^{1/2} ~ Ca+(0,1). A HalfCauchyPrior
// tau_prior here means tau^{1/2} ~ Ca+(0,1); other TauPrior choices act on tau.
struct Horseshoe {
  TauPrior tau_prior;
};

using PriorSpec =
    std::variant<IidNormal, GlobalOnly, GlobalLocal, DirichletLaplace, PointMassMixture, Horseshoe>;

// Sparse ground truth theta0 with explicit support.
struct SparseTruth {
  int n = 0;
  std::vector<int> support;     // indices in [0, n)
  std::vector<double> values;   // nonzero values on the support
  std::vector<double> dense() const;
  double squared_norm() const;
};

void validate(const TauPrior& tp);
void validate(const PriorSpec& spec);

double sample_tau(const TauPrior& tp, RngStream& rng);

// Log density of the tau prior on (0, inf); Deterministic is a point mass and
// has no density (throws).
double tau_log_density(const TauPrior& tp, double tau);

std::vector<double> sample_theta_prior(const PriorSpec& spec, int n, RngStream& rng);

// Normalized complexity prior pi_n(s) ∝ exp{-kappa * s * log(2n/s)} over
// s = 0..n, with the s=0 exponent taken as its 0 limit.
std::vector<double> complexity_prior_pmf(int n, double kappa);
std::vector<double> complexity_prior_log_unnorm(int n, double kappa);

}  // namespace shrinkage
