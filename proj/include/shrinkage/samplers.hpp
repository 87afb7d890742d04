#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shrinkage/priors.hpp"
#include "shrinkage/rng.hpp"

namespace shrinkage {

// One MCMC state for the normal-means samplers. The DL sweep uses all four
// blocks; BL and HS keep phi untouched and use psi as their local variances.
struct ChainState {
  std::vector<double> theta;
  std::vector<double> psi;
  std::vector<double> phi;
  double tau = 1.0;
};

struct McmcConfig {
  int n_iter = 3000;    // total sweeps, including burn-in
  int n_burnin = 1000;  // n_iter > n_burnin >= 0
  int thin = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

struct FitSummary {
  std::vector<double> posterior_median;
  double squared_error = 0.0;  // NaN when no truth was supplied
  std::int64_t kept_draws = 0;
  std::string method;
};

ChainState make_chain_state(const std::vector<double>& y);
void validate(const ChainState& s);
void validate(const McmcConfig& cfg);

// One sweep: the (phi, tau, psi) block given theta, then theta given the rest.
// Pass update_tau = false to hold the global scale fixed.
ChainState dl_gibbs_step(ChainState state, const std::vector<double>& y, double a,
                         RngStream& rng, bool update_tau = true);

// phi | theta via normalized giG(a-1, 1, 2|theta_j|) variates.
std::vector<double> sample_phi_posterior(const std::vector<double>& theta, double a,
                                         RngStream& rng);

ChainState bl_gibbs_step(ChainState state, const std::vector<double>& y, RngStream& rng,
                         double local_rate = 0.5, bool update_tau = true);

ChainState hs_gibbs_step(ChainState state, const std::vector<double>& y, RngStream& rng,
                         bool update_tau = true);

// Exact posterior over support subsets for the spike-and-slab model with the
// complexity prior on |S| and standard Laplace slabs. All combinatorial sums
// run in log space through elementary-symmetric-polynomial tables, so no
// subtraction of near-equal terms occurs anywhere.
class PmPosterior {
 public:
  PmPosterior(std::vector<double> y, double kappa);

  int n() const { return n_; }
  double log_r(int j) const { return log_r_[static_cast<std::size_t>(j)]; }
  // log P(|S| = s | y), s = 0..n.
  double log_size_posterior(int s) const { return log_size_post_[static_cast<std::size_t>(s)]; }
  // log P(S = support | y); support must be strictly increasing indices.
  double log_support_posterior(const std::vector<int>& support) const;
  double inclusion_prob(int j) const { return incl_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& inclusion_probs() const { return incl_; }
  // Exact draw of the support set, ascending indices.
  std::vector<int> sample_support(RngStream& rng) const;
  double coordinate_median(int j) const { return median_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& posterior_median() const { return median_; }

 private:
  double log_esp_without(int j, int m) const;

  int n_ = 0;
  double kappa_ = 0.0;
  std::vector<double> y_;
  std::vector<double> log_r_;
  // log_pre_[j][k] = log e_k(r_0..r_{j-1}); log_suf_[j][k] = log e_k(r_j..r_{n-1}).
  std::vector<std::vector<double>> log_pre_;
  std::vector<std::vector<double>> log_suf_;
  std::vector<double> log_size_post_;
  std::vector<double> incl_;
  std::vector<double> median_;
};

FitSummary pm_exact_posterior(const std::vector<double>& y, double kappa, RngStream&);

std::vector<double> lasso_soft_threshold(const std::vector<double>& y, double lam);

// Burn-in + kept sweeps for spec in {DirichletLaplace, GlobalLocal, Horseshoe};
// a Deterministic tau prior pins the global scale for the whole chain.
FitSummary run_chain(const PriorSpec& spec, const std::vector<double>& y, const McmcConfig& cfg,
                     const std::optional<SparseTruth>& truth = std::nullopt);

}  // namespace shrinkage
