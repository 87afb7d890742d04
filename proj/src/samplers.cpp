#include "shrinkage/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "shrinkage/distributions.hpp"
#include "shrinkage/special.hpp"

namespace shrinkage {

using special::log_diff_exp;
using special::log_normal_cdf;
using special::log_sum_exp;

namespace {

constexpr double kFloor = 1e-300;
constexpr double kCeil = 1e300;
constexpr double kThetaFloor = 1e-100;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamp_pos(double x) {
  if (!(x > kFloor)) return kFloor;
  if (!(x < kCeil)) return kCeil;
  return x;
}

void check_finite(const std::vector<double>& y, const char* what) {
  if (y.empty()) throw std::invalid_argument(std::string(what) + ": empty vector");
  for (const double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

// theta_j | rest is N(mu, sig2) with sig2 = v/(1+v), mu = y_j v/(1+v); the
// v = inf limit (possible after extreme tau draws) collapses to N(y_j, 1).
void conjugate_update(double v, double y, double& mu, double& sig2) {
  if (!std::isfinite(v)) {
    sig2 = 1.0;
    mu = y;
    return;
  }
  const double s = v / (1.0 + v);
  sig2 = s;
  mu = y * s;
}

double median_inplace(std::vector<double>& v) {
  const std::size_t m = v.size();
  if (m == 0) throw std::logic_error("median of empty sample");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(m / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double hi = *mid;
  if (m % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

std::string dl_method_tag(double a, std::size_t n) {
  if (std::abs(a * static_cast<double>(n) - 1.0) < 1e-9) return "DL:1/n";
  if (a == 0.5) return "DL:1/2";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "DL:%g", a);
  return buf;
}

}  // namespace

ChainState make_chain_state(const std::vector<double>& y) {
  check_finite(y, "make_chain_state");
  const std::size_t n = y.size();
  ChainState st;
  st.theta = y;
  st.psi.assign(n, 1.0);
  st.phi.assign(n, 1.0 / static_cast<double>(n));
  st.tau = 1.0;
  return st;
}

void validate(const ChainState& s) {
  const std::size_t n = s.theta.size();
  if (n == 0 || s.psi.size() != n || s.phi.size() != n) {
    throw std::invalid_argument("ChainState: inconsistent block sizes");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(s.theta[j])) throw std::invalid_argument("ChainState: non-finite theta");
    if (!(s.psi[j] > 0.0) || !std::isfinite(s.psi[j])) {
      throw std::invalid_argument("ChainState: psi must be strictly positive");
    }
    if (!(s.phi[j] > 0.0)) throw std::invalid_argument("ChainState: phi must be strictly positive");
    sum += s.phi[j];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("ChainState: phi must sum to 1");
  if (!(s.tau > 0.0) || !std::isfinite(s.tau)) {
    throw std::invalid_argument("ChainState: tau must be strictly positive");
  }
}

void validate(const McmcConfig& cfg) {
  if (cfg.n_burnin < 0 || cfg.n_iter <= cfg.n_burnin) {
    throw std::invalid_argument("McmcConfig: need n_iter > n_burnin >= 0");
  }
  if (cfg.thin < 1) throw std::invalid_argument("McmcConfig: thin must be >= 1");
}

std::vector<double> sample_phi_posterior(const std::vector<double>& theta, double a,
                                         RngStream& rng) {
  check_finite(theta, "sample_phi_posterior");
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("sample_phi_posterior: a not in (0,1]");
  const std::size_t n = theta.size();
  // Draws are taken in log space: near-collapsed chains produce T_j hundreds
  // of orders of magnitude below DBL_MIN, and flattening them to a common
  // floor would erase the heavy-tailed spikes the phi conditional relies on.
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) {
    const GigParams p{a - 1.0, 1.0, std::max(2.0 * std::abs(theta[j]), kFloor)};
    t[j] = sample_gig_log(p, rng);
  }
  const double top = *std::max_element(t.begin(), t.end());
  double sum = 0.0;
  for (auto& v : t) {
    v = std::max(std::exp(v - top), kFloor);
    sum += v;
  }
  for (auto& v : t) v /= sum;
  return t;
}

ChainState dl_gibbs_step(ChainState state, const std::vector<double>& y, double a, RngStream& rng,
                         bool update_tau) {
  const std::size_t n = y.size();
  if (state.theta.size() != n) throw std::invalid_argument("dl_gibbs_step: size mismatch");
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("dl_gibbs_step: a not in (0,1]");

  // (phi, tau, psi) | theta drawn as one block via the chain rule: phi | theta
  // marginalizes (psi, tau), tau | phi, theta marginalizes psi, then psi gets
  // its full conditional. Refreshing psi before phi/tau move would leave it
  // conditioned on stale scales and the chain degenerates. The block runs
  // before the theta refresh so that the first sweep conditions the scales on
  // the theta = y start; leading with theta instead would overwrite it using
  // the uninformative initial scales, and every chain would have to climb out
  // of a fully shrunk state during burn-in (at sparse a the climb is a rare
  // event per coordinate and strong signals get stranded near zero).
  state.phi = sample_phi_posterior(state.theta, a, rng);

  if (update_tau) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += std::abs(state.theta[j]) / state.phi[j];
    const double lam = a * static_cast<double>(n) - static_cast<double>(n);
    const GigParams p{lam, 1.0, std::min(std::max(2.0 * r, kFloor), kCeil)};
    // The extra floor keeps phi_j^2 tau^2 representable for the dominant phi
    // coordinate; letting tau reach the global floor makes theta underflow to
    // exactly zero, which is a fixed point of the whole sweep.
    state.tau = std::max(clamp_pos(sample_gig(p, rng)), 1e-80);
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double mu = clamp_pos(state.phi[j] * state.tau / std::abs(state.theta[j]));
    const double zeta = sample_inverse_gaussian(mu, 1.0, rng);
    state.psi[j] = clamp_pos(1.0 / zeta);
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double scale = state.phi[j] * state.tau;
    const double v = state.psi[j] * scale * scale;
    double mu, sig2;
    conjugate_update(v, y[j], mu, sig2);
    state.theta[j] = mu + std::sqrt(sig2) * rng.normal();
    // Reflect |theta_j| off a floor that carries Lebesgue-negligible posterior
    // mass. Without it a null coordinate can diffuse down until phi_j^2
    // underflows, after which theta_j is drawn as exactly zero and the
    // coordinate is absorbed there for good; once enough coordinates are
    // absorbed their missing |theta|/phi terms drag tau, and eventually the
    // signal coordinates, into a collapse the exact chain never exhibits.
    if (std::abs(state.theta[j]) < kThetaFloor) {
      state.theta[j] = std::copysign(kThetaFloor, state.theta[j]);
    }
  }

  return state;
}

ChainState bl_gibbs_step(ChainState state, const std::vector<double>& y, RngStream& rng,
                         double local_rate, bool update_tau) {
  const std::size_t n = y.size();
  if (state.theta.size() != n) throw std::invalid_argument("bl_gibbs_step: size mismatch");
  if (!(local_rate > 0.0)) throw std::invalid_argument("bl_gibbs_step: local_rate must be > 0");

  for (std::size_t j = 0; j < n; ++j) {
    double mu, sig2;
    conjugate_update(state.psi[j] * state.tau, y[j], mu, sig2);
    state.theta[j] = mu + std::sqrt(sig2) * rng.normal();
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double chi = std::max(state.theta[j] * state.theta[j] / state.tau, kFloor);
    state.psi[j] = clamp_pos(sample_gig(GigParams{0.5, 2.0 * local_rate, chi}, rng));
  }

  if (update_tau) {
    const double aux = sample_inverse_gamma(1.0, 1.0 + 1.0 / state.tau, rng);
    double rate = 1.0 / aux;
    for (std::size_t j = 0; j < n; ++j) {
      rate += state.theta[j] * state.theta[j] / (2.0 * state.psi[j]);
    }
    const double shape = 0.5 * (static_cast<double>(n) + 1.0);
    state.tau = clamp_pos(sample_inverse_gamma(shape, std::min(rate, kCeil), rng));
  }
  return state;
}

ChainState hs_gibbs_step(ChainState state, const std::vector<double>& y, RngStream& rng,
                         bool update_tau) {
  const std::size_t n = y.size();
  if (state.theta.size() != n) throw std::invalid_argument("hs_gibbs_step: size mismatch");

  for (std::size_t j = 0; j < n; ++j) {
    double mu, sig2;
    conjugate_update(state.psi[j] * state.tau, y[j], mu, sig2);
    state.theta[j] = mu + std::sqrt(sig2) * rng.normal();
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double nu = sample_inverse_gamma(1.0, 1.0 + 1.0 / state.psi[j], rng);
    const double rate = 1.0 / nu + state.theta[j] * state.theta[j] / (2.0 * state.tau);
    state.psi[j] = clamp_pos(sample_inverse_gamma(1.0, std::min(rate, kCeil), rng));
  }

  if (update_tau) {
    const double aux = sample_inverse_gamma(1.0, 1.0 + 1.0 / state.tau, rng);
    double rate = 1.0 / aux;
    for (std::size_t j = 0; j < n; ++j) {
      rate += state.theta[j] * state.theta[j] / (2.0 * state.psi[j]);
    }
    const double shape = 0.5 * (static_cast<double>(n) + 1.0);
    state.tau = clamp_pos(sample_inverse_gamma(shape, std::min(rate, kCeil), rng));
  }
  return state;
}

// ---------------------------------------------------------------------------
// Point-mass mixture: exact posterior machinery.

namespace {

// log m1(y): marginal of y = theta + e, theta ~ Laplace(1), e ~ N(0,1).
double log_slab_marginal(double y) {
  const double a = -y + log_normal_cdf(y - 1.0);
  const double b = y + log_normal_cdf(-y - 1.0);
  return 0.5 - std::log(2.0) + log_sum_exp(a, b);
}

double log_normal_density(double y) {
  return -0.5 * std::log(2.0 * 3.14159265358979323846) - 0.5 * y * y;
}

// log of the unnormalized slab-posterior CDF at m: integral of
// phi(t - y) exp(-|t|) over t in (-inf, m].
double log_slab_cdf_unnorm(double y, double m) {
  const double neg = (y + 0.5) + log_normal_cdf(std::min(m, 0.0) - y - 1.0);
  if (m <= 0.0) return neg;
  const double hi = log_normal_cdf(m - y + 1.0);
  const double lo = log_normal_cdf(-y + 1.0);
  if (hi <= lo) return neg;
  return log_sum_exp(neg, (0.5 - y) + log_diff_exp(hi, lo));
}

double log_slab_norm(double y) {
  return log_sum_exp((y + 0.5) + log_normal_cdf(-y - 1.0),
                     (0.5 - y) + log_normal_cdf(y - 1.0));
}

// Quantile of the slab posterior by bisection on the log CDF.
double slab_quantile(double y, double target) {
  const double log_z = log_slab_norm(y);
  const double log_t = std::log(target);
  double lo = std::min(y, 0.0) - 45.0;
  double hi = std::max(y, 0.0) + 45.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_slab_cdf_unnorm(y, mid) - log_z < log_t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PmPosterior::PmPosterior(std::vector<double> y, double kappa)
    : n_(static_cast<int>(y.size())), kappa_(kappa), y_(std::move(y)) {
  check_finite(y_, "PmPosterior");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("PmPosterior: kappa must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(n_);

  log_r_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    log_r_[j] = log_slab_marginal(y_[j]) - log_normal_density(y_[j]);
  }

  log_pre_.assign(n + 1, std::vector<double>(n + 1, kNegInf));
  log_pre_[0][0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    log_pre_[j][0] = 0.0;
    for (std::size_t k = 1; k <= j; ++k) {
      log_pre_[j][k] = log_sum_exp(log_pre_[j - 1][k], log_r_[j - 1] + log_pre_[j - 1][k - 1]);
    }
  }
  log_suf_.assign(n + 1, std::vector<double>(n + 1, kNegInf));
  log_suf_[n][0] = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    log_suf_[j][0] = 0.0;
    for (std::size_t k = 1; k <= n - j; ++k) {
      log_suf_[j][k] = log_sum_exp(log_suf_[j + 1][k], log_r_[j] + log_suf_[j + 1][k - 1]);
    }
  }

  const std::vector<double> log_pi = complexity_prior_log_unnorm(n_, kappa_);
  log_size_post_.resize(n + 1);
  for (std::size_t s = 0; s <= n; ++s) {
    log_size_post_[s] = log_pi[s] - special::log_choose(n_, static_cast<std::int64_t>(s)) +
                        log_pre_[n][s];
  }
  const double log_z = log_sum_exp(log_size_post_);
  for (auto& v : log_size_post_) v -= log_z;

  incl_.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = kNegInf;
    for (std::size_t s = 1; s <= n; ++s) {
      if (log_size_post_[s] == kNegInf) continue;
      const double cond = log_r_[j] + log_esp_without(static_cast<int>(j), static_cast<int>(s) - 1) -
                          log_pre_[n][s];
      acc = log_sum_exp(acc, log_size_post_[s] + cond);
    }
    incl_[j] = std::min(std::exp(acc), 1.0);
  }

  median_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = incl_[j];
    const double log_z_slab = log_slab_norm(y_[j]);
    const double f0 = std::exp(log_slab_cdf_unnorm(y_[j], 0.0) - log_z_slab);
    if (p * f0 > 0.5) {
      median_[j] = slab_quantile(y_[j], 0.5 / p);
    } else if ((1.0 - p) + p * f0 < 0.5) {
      median_[j] = slab_quantile(y_[j], (p - 0.5) / p);
    } else {
      median_[j] = 0.0;
    }
  }
}

double PmPosterior::log_esp_without(int j, int m) const {
  if (m < 0 || m > n_ - 1) return kNegInf;
  const std::size_t uj = static_cast<std::size_t>(j);
  double acc = kNegInf;
  const int lo = std::max(0, m - (n_ - 1 - j));
  const int hi = std::min(m, j);
  for (int i = lo; i <= hi; ++i) {
    acc = log_sum_exp(acc, log_pre_[uj][static_cast<std::size_t>(i)] +
                               log_suf_[uj + 1][static_cast<std::size_t>(m - i)]);
  }
  return acc;
}

double PmPosterior::log_support_posterior(const std::vector<int>& support) const {
  const std::size_t s = support.size();
  if (s > static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("log_support_posterior: support larger than n");
  }
  double lp = log_size_post_[s] - log_pre_[static_cast<std::size_t>(n_)][s];
  int prev = -1;
  for (const int j : support) {
    if (j <= prev || j >= n_) {
      throw std::invalid_argument("log_support_posterior: indices must be strictly increasing");
    }
    prev = j;
    lp += log_r_[static_cast<std::size_t>(j)];
  }
  return lp;
}

std::vector<int> PmPosterior::sample_support(RngStream& rng) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  double u = rng.uniform();
  std::size_t s = 0;
  double cum = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    cum += std::exp(log_size_post_[k]);
    if (u <= cum || k == n) {
      s = k;
      break;
    }
  }
  std::vector<int> out;
  out.reserve(s);
  std::size_t k = s;
  for (std::size_t j = n; j-- > 0 && k > 0;) {
    const double p_in =
        j + 1 == k ? 1.0 : std::exp(log_r_[j] + log_pre_[j][k - 1] - log_pre_[j + 1][k]);
    if (rng.uniform() < p_in) {
      out.push_back(static_cast<int>(j));
      --k;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

FitSummary pm_exact_posterior(const std::vector<double>& y, double kappa, RngStream&) {
  PmPosterior post(y, kappa);
  FitSummary fit;
  fit.posterior_median = post.posterior_median();
  fit.squared_error = kNaN;
  fit.kept_draws = 0;
  fit.method = "PM";
  return fit;
}

std::vector<double> lasso_soft_threshold(const std::vector<double>& y, double lam) {
  if (!(lam > 0.0)) throw std::invalid_argument("lasso_soft_threshold: lam must be > 0");
  std::vector<double> out(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double mag = std::abs(y[j]) - lam;
    out[j] = mag > 0.0 ? std::copysign(mag, y[j]) : 0.0;
  }
  return out;
}

FitSummary run_chain(const PriorSpec& spec, const std::vector<double>& y, const McmcConfig& cfg,
                     const std::optional<SparseTruth>& truth) {
  check_finite(y, "run_chain");
  validate(cfg);
  validate(spec);
  const std::size_t n = y.size();
  RngStream rng(cfg.seed, cfg.stream_id);

  double fixed_tau = 0.0;
  bool tau_fixed = false;
  std::string method;
  enum class Kind { dl, bl, hs } kind;
  double dl_a = 0.0;
  double local_rate = 0.5;

  if (const auto* dl = std::get_if<DirichletLaplace>(&spec)) {
    kind = Kind::dl;
    dl_a = dl->a;
    method = dl_method_tag(dl->a, n);
    if (const auto* det = std::get_if<Deterministic>(&dl->tau_prior)) {
      tau_fixed = true;
      fixed_tau = det->tau_n;
    }
  } else if (const auto* gl = std::get_if<GlobalLocal>(&spec)) {
    kind = Kind::bl;
    local_rate = gl->local_rate;
    method = "BL";
    if (const auto* det = std::get_if<Deterministic>(&gl->tau_prior)) {
      tau_fixed = true;
      fixed_tau = det->tau_n;
    }
  } else if (const auto* hs = std::get_if<Horseshoe>(&spec)) {
    kind = Kind::hs;
    method = "HS";
    if (const auto* det = std::get_if<Deterministic>(&hs->tau_prior)) {
      tau_fixed = true;
      fixed_tau = det->tau_n;
    }
  } else {
    throw std::invalid_argument("run_chain: spec must be DirichletLaplace, GlobalLocal, or Horseshoe");
  }

  ChainState st = make_chain_state(y);
  if (tau_fixed) st.tau = fixed_tau;

  const std::int64_t kept =
      (static_cast<std::int64_t>(cfg.n_iter) - cfg.n_burnin + cfg.thin - 1) / cfg.thin;
  std::vector<double> draws(static_cast<std::size_t>(kept) * n);

  std::int64_t kept_so_far = 0;
  for (int it = 0; it < cfg.n_iter; ++it) {
    switch (kind) {
      case Kind::dl:
        st = dl_gibbs_step(std::move(st), y, dl_a, rng, !tau_fixed);
        break;
      case Kind::bl:
        st = bl_gibbs_step(std::move(st), y, rng, local_rate, !tau_fixed);
        break;
      case Kind::hs:
        st = hs_gibbs_step(std::move(st), y, rng, !tau_fixed);
        break;
    }
    if (it >= cfg.n_burnin && (it - cfg.n_burnin) % cfg.thin == 0) {
      std::copy(st.theta.begin(), st.theta.end(),
                draws.begin() + static_cast<std::ptrdiff_t>(kept_so_far * static_cast<std::int64_t>(n)));
      ++kept_so_far;
    }
  }

  FitSummary fit;
  fit.method = method;
  fit.kept_draws = kept_so_far;
  fit.posterior_median.resize(n);
  std::vector<double> column(static_cast<std::size_t>(kept_so_far));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::int64_t k = 0; k < kept_so_far; ++k) {
      column[static_cast<std::size_t>(k)] = draws[static_cast<std::size_t>(k) * n + j];
    }
    fit.posterior_median[j] = median_inplace(column);
  }

  if (truth.has_value()) {
    if (truth->n != static_cast<int>(n)) throw std::invalid_argument("run_chain: truth size mismatch");
    const std::vector<double> t0 = truth->dense();
    double se = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = fit.posterior_median[j] - t0[j];
      se += d * d;
    }
    fit.squared_error = se;
  } else {
    fit.squared_error = kNaN;
  }
  return fit;
}

}  // namespace shrinkage
