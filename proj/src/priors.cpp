#include "shrinkage/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "shrinkage/distributions.hpp"
#include "shrinkage/special.hpp"

namespace shrinkage {

std::vector<double> SparseTruth::dense() const {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) out[support[i]] = values[i];
  return out;
}

double SparseTruth::squared_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

void validate(const TauPrior& tp) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Deterministic>) {
          if (!(t.tau_n > 0.0)) throw std::invalid_argument("Deterministic: tau_n must be positive");
        } else if constexpr (std::is_same_v<T, InverseGamma>) {
          if (!(t.alpha > 0.0) || !(t.beta > 0.0))
            throw std::invalid_argument("InverseGamma: parameters must be positive");
        } else if constexpr (std::is_same_v<T, ExponentialPrior>) {
          if (!(t.rate > 0.0)) throw std::invalid_argument("Exponential: rate must be positive");
        }
      },
      tp);
}

void validate(const PriorSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidNormal>) {
          if (!(s.variance > 0.0)) throw std::invalid_argument("IidNormal: variance must be positive");
        } else if constexpr (std::is_same_v<T, GlobalOnly>) {
          validate(s.tau_prior);
        } else if constexpr (std::is_same_v<T, GlobalLocal>) {
          validate(s.tau_prior);
          if (!(s.local_rate > 0.0)) throw std::invalid_argument("GlobalLocal: local_rate must be positive");
        } else if constexpr (std::is_same_v<T, DirichletLaplace>) {
          validate(s.tau_prior);
          if (!(s.a > 0.0) || s.a > 1.0) throw std::invalid_argument("DirichletLaplace: a must lie in (0,1]");
        } else if constexpr (std::is_same_v<T, PointMassMixture>) {
          if (!(s.kappa > 0.0)) throw std::invalid_argument("PointMassMixture: kappa must be positive");
        } else if constexpr (std::is_same_v<T, Horseshoe>) {
          validate(s.tau_prior);
        }
      },
      spec);
}

double sample_tau(const TauPrior& tp, RngStream& rng) {
  return std::visit(
      [&rng](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Deterministic>) {
          return t.tau_n;
        } else if constexpr (std::is_same_v<T, InverseGamma>) {
          return sample_inverse_gamma(t.alpha, t.beta, rng);
        } else if constexpr (std::is_same_v<T, ExponentialPrior>) {
          return rng.exponential(t.rate);
        } else {
          return sample_half_cauchy(rng);
        }
      },
      tp);
}

double tau_log_density(const TauPrior& tp, double tau) {
  if (!(tau > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::visit(
      [tau](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Deterministic>) {
          throw std::invalid_argument("tau_log_density: Deterministic prior has no density");
        } else if constexpr (std::is_same_v<T, InverseGamma>) {
          return t.alpha * std::log(t.beta) - std::lgamma(t.alpha) -
                 (t.alpha + 1.0) * std::log(tau) - t.beta / tau;
        } else if constexpr (std::is_same_v<T, ExponentialPrior>) {
          return std::log(t.rate) - t.rate * tau;
        } else {
          // Half-Cauchy on tau itself: 2/(pi (1 + tau^2)).
          return std::log(2.0 / 3.141592653589793238463) - std::log1p(tau * tau);
        }
      },
      tp);
}

namespace {

std::vector<double> sample_pm_theta(const PointMassMixture& pm, int n, RngStream& rng) {
  std::vector<double> pmf = complexity_prior_pmf(n, pm.kappa);
  double u = rng.uniform();
  int s = n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    acc += pmf[k];
    if (u <= acc) {
      s = k;
      break;
    }
  }
  // Partial Fisher-Yates for a uniform size-s subset.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < s; ++k) {
    int j = k + static_cast<int>(rng.uniform() * (n - k));
    j = std::min(j, n - 1);
    std::swap(idx[k], idx[j]);
  }
  std::vector<double> theta(n, 0.0);
  for (int k = 0; k < s; ++k) theta[idx[k]] = sample_double_exponential(1.0, rng);
  return theta;
}

}  // namespace

std::vector<double> sample_theta_prior(const PriorSpec& spec, int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_theta_prior: n must be >= 1");
  validate(spec);
  return std::visit(
      [n, &rng](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        std::vector<double> theta(n);
        if constexpr (std::is_same_v<T, IidNormal>) {
          double sd = std::sqrt(s.variance);
          for (auto& t : theta) t = sd * rng.normal();
        } else if constexpr (std::is_same_v<T, GlobalOnly>) {
          double sd = std::sqrt(sample_tau(s.tau_prior, rng));
          for (auto& t : theta) t = sd * rng.normal();
        } else if constexpr (std::is_same_v<T, GlobalLocal>) {
          double tau = sample_tau(s.tau_prior, rng);
          for (auto& t : theta) t = std::sqrt(rng.exponential(s.local_rate) * tau) * rng.normal();
        } else if constexpr (std::is_same_v<T, DirichletLaplace>) {
          double tau = sample_tau(s.tau_prior, rng);
          std::vector<double> phi = sample_dirichlet(std::vector<double>(n, s.a), rng);
          for (int j = 0; j < n; ++j) theta[j] = sample_double_exponential(phi[j] * tau, rng);
        } else if constexpr (std::is_same_v<T, PointMassMixture>) {
          theta = sample_pm_theta(s, n, rng);
        } else {  // Horseshoe
          double tau;
          if (std::holds_alternative<HalfCauchyPrior>(s.tau_prior)) {
            double r = sample_half_cauchy(rng);
            tau = r * r;
          } else {
            tau = sample_tau(s.tau_prior, rng);
          }
          for (auto& t : theta) {
            double l = sample_half_cauchy(rng);
            t = l * std::sqrt(tau) * rng.normal();
          }
        }
        return theta;
      },
      spec);
}

std::vector<double> complexity_prior_log_unnorm(int n, double kappa) {
  if (n < 1 || !(kappa > 0.0)) throw std::invalid_argument("complexity prior: need n >= 1, kappa > 0");
  std::vector<double> lp(n + 1);
  lp[0] = 0.0;
  for (int s = 1; s <= n; ++s) lp[s] = -kappa * s * std::log(2.0 * n / s);
  return lp;
}

std::vector<double> complexity_prior_pmf(int n, double kappa) {
  std::vector<double> lp = complexity_prior_log_unnorm(n, kappa);
  double lz = special::log_sum_exp(lp);
  std::vector<double> pmf(n + 1);
  for (int s = 0; s <= n; ++s) pmf[s] = std::exp(lp[s] - lz);
  return pmf;
}

}  // namespace shrinkage
