#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shrinkage/rng.hpp"

namespace shrinkage {

struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string comparison;  // rel | ge | le
  std::string method;      // mc+quadrature | quadrature | exact | ks
};

// Simplex integral of h(sum x) * prod x_j^{alpha_j - 1} by uniform-on-simplex
// MC against the 1-d reduction quadrature. Registered h tags: constant,
// identity, one_over_one_plus_t, ig_kernel, power.
VerificationReport verify_dirichlet_formula(int n, const std::string& h_tag,
                                            const std::vector<double>& alphas,
                                            std::int64_t n_points = 1000000,
                                            RngStream rng = RngStream(17, 0),
                                            double tol = 1e-2);

// MC of the simplex integral with kernel 1/(sum q_j x_j + q0)^{n/2-1} and all
// alpha_j = 1/2 against the 1-d right side; needs n >= 3 for integrability.
VerificationReport verify_dickey_integral(int n, double q0, const std::vector<double>& q,
                                          std::int64_t n_points = 1000000,
                                          RngStream rng = RngStream(18, 0),
                                          double tol = 2e-2);

// Quadrature value of the Dickey right side alone (used for homogeneity and
// cross-lemma consistency checks).
double dickey_rhs_quadrature(int n, double q0, const std::vector<double>& q);
double dirichlet_rhs_quadrature(int n, const std::string& h_tag,
                                const std::vector<double>& alphas);

// Upper bound erfc_scaled(x) <= 1/sqrt(x + 1/pi) on the whole grid; lower
// bound erfc_scaled(x) >= (1/x)^{1+delta} at grid points x >= 2 for
// delta in {0.1, 0.01, 1/99}. lhs is the worst signed margin.
VerificationReport verify_erfc_bounds(const std::vector<double>& grid);

// Quadrature of int_0^1 tau^{-n/2} exp(-a_n/(2 tau)) dtau against the lower
// bound (2/a_n)^{n/2-1} Gamma(n/2-1) xi_n, all in log space.
VerificationReport verify_incomplete_gamma_bound(int n, double a_n);

// log(1 - xi_n), exposed for the (1 - xi_n) * sqrt(n) boundedness check.
double log_one_minus_xi(int n);

// KS of |theta_1| under the simplex-scale hierarchy against Gamma(1/n, 1/tau).
VerificationReport verify_wg_marginal(int n, double tau, std::int64_t n_draws,
                                      RngStream rng = RngStream(19, 0));

// Shifted-ball sandwich with exact (non)central chi-square middle term.
VerificationReport verify_anderson(int n, double tau, const std::vector<double>& theta0,
                                   double t);

// Full suite in a fixed order. perturb = true multiplies one reference side by
// 1.1 as a negative control; all_pass reflects the reports.
std::vector<VerificationReport> run_verification_suite(std::uint64_t seed, bool perturb = false);
bool all_pass(const std::vector<VerificationReport>& reports);

}  // namespace shrinkage
