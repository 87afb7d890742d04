#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "shrinkage/distributions.hpp"
#include "shrinkage/priors.hpp"
#include "shrinkage/quadrature.hpp"
#include "shrinkage/rng.hpp"
#include "shrinkage/samplers.hpp"
#include "shrinkage/special.hpp"
#include "shrinkage/stats.hpp"

using namespace shrinkage;
using shrinkage::stats::ks_one_sample;
using shrinkage::stats::ks_two_sample;

namespace {

// log of int phi(t - y) (2s)^{-1} e^{-|t|/s} dt, the Laplace-noise marginal.
// Written through erfc_scaled so the s -> 0 regime keeps full precision.
double log_de_normal_marginal(double y, double s) {
  auto log_piece = [&](double yy) {
    const double z = 1.0 / s - yy;  // exponent e^{-yy/s} Phi(yy - 1/s)
    if (z > 0.0) {
      return -0.5 * yy * yy + std::log(special::erfc_scaled(0.5 * z * z)) -
             std::log(2.0 * std::sqrt(M_PI));
    }
    return 0.5 / (s * s) - yy / s + special::log_normal_cdf(yy - 1.0 / s);
  };
  return -std::log(2.0 * s) + special::log_sum_exp(log_piece(y), log_piece(-y));
}

// K_{3/2}(x) = sqrt(pi / (2x)) e^{-x} (1 + 1/x)
double log_bessel_k_3half(double x) {
  return 0.5 * std::log(M_PI / (2.0 * x)) - x + std::log1p(1.0 / x);
}

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("chain state construction and validation") {
  std::vector<double> y{1.0, -2.0, 0.5};
  ChainState st = make_chain_state(y);
  CHECK(st.theta == y);
  CHECK(st.tau == 1.0);
  for (double p : st.psi) CHECK(p == 1.0);
  for (double f : st.phi) CHECK(f == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_NOTHROW(validate(st));

  ChainState bad = st;
  bad.phi[0] = 0.9;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = st;
  bad.psi[1] = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = st;
  bad.theta[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = st;
  bad.tau = -1.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = st;
  bad.psi.pop_back();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  CHECK_THROWS_AS(make_chain_state(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(make_chain_state(std::vector<double>{1.0, 1.0 / 0.0}), std::invalid_argument);

  McmcConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.n_burnin = cfg.n_iter;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg = McmcConfig{};
  cfg.thin = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("theta block draws N(y v/(1+v), v/(1+v)) at unit scales") {
  // fresh state every sweep, so the returned theta is exactly one conjugate
  // draw with v = psi tau = 1
  const std::vector<double> y{3.0};
  RngStream rng(601, 0);
  std::vector<double> draws(20000);
  for (auto& d : draws) {
    ChainState st = make_chain_state(y);
    st = bl_gibbs_step(std::move(st), y, rng, 0.5, false);
    d = st.theta[0];
  }
  auto ks = ks_one_sample(std::move(draws), [](double t) {
    return special::normal_cdf((t - 1.5) / std::sqrt(0.5));
  });
  CHECK(ks.p_value > 0.005);
}

TEST_CASE("reciprocal inverse-Gaussian equals the giG(1/2) psi conditional") {
  RngStream r1(602, 0), r2(603, 0);
  for (double chi : {0.04, 1.0, 25.0}) {
    const double mu = 1.0 / std::sqrt(chi);
    std::vector<double> lhs(20000), rhs(20000);
    for (auto& v : lhs) v = 1.0 / sample_inverse_gaussian(mu, 1.0, r1);
    for (auto& v : rhs) v = sample_gig(GigParams{0.5, 1.0, chi}, r2);
    auto ks = ks_two_sample(std::move(lhs), std::move(rhs));
    INFO("chi=", chi);
    CHECK(ks.p_value > 0.005);
  }
}

TEST_CASE("phi conditional: degenerate n = 1 and exchangeable means") {
  RngStream rng(604, 0);
  auto one = sample_phi_posterior({2.7}, 0.5, rng);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 1.0);

  const int n = 4, reps = 40000;
  std::vector<double> theta(n, 1.5);
  std::vector<double> mean(n, 0.0);
  for (int r = 0; r < reps; ++r) {
    auto phi = sample_phi_posterior(theta, 0.25, rng);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      CHECK(phi[j] > 0.0);
      mean[j] += phi[j];
      s += phi[j];
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int j = 0; j < n; ++j) CHECK(mean[j] / reps == doctest::Approx(0.25).epsilon(0.03));

  CHECK_THROWS_AS(sample_phi_posterior(theta, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_phi_posterior(theta, 1.5, rng), std::invalid_argument);
}

TEST_CASE("phi conditional matches a simplex random-walk oracle") {
  // p(phi | theta) with tau marginalized over Gamma(na, 1/2):
  //   prod_j phi_j^{a-2} (2R)^{nu/2} K_nu(sqrt(2R)),  R = sum |theta_j|/phi_j,
  // nu = na - n = -3/2 here, so K_nu has a closed form.
  const double a = 0.5;
  const std::vector<double> theta{2.0, 1.0, 0.5};
  auto log_target = [&](double p1, double p2) {
    const double p3 = 1.0 - p1 - p2;
    const double r = 2.0 / p1 + 1.0 / p2 + 0.5 / p3;
    return (a - 2.0) * (std::log(p1) + std::log(p2) + std::log(p3)) -
           0.75 * std::log(2.0 * r) + log_bessel_k_3half(std::sqrt(2.0 * r));
  };

  RngStream rng(605, 0);
  double p1 = 0.5, p2 = 0.3;
  double lt = log_target(p1, p2);
  double om1 = 0.0, om2 = 0.0;
  const int iters = 600000, burn = 50000;
  int kept = 0;
  for (int it = 0; it < iters; ++it) {
    const double q1 = p1 + 0.06 * rng.normal();
    const double q2 = p2 + 0.06 * rng.normal();
    if (q1 > 1e-12 && q2 > 1e-12 && q1 + q2 < 1.0 - 1e-12) {
      const double cand = log_target(q1, q2);
      if (std::log(rng.uniform()) < cand - lt) {
        p1 = q1;
        p2 = q2;
        lt = cand;
      }
    }
    if (it >= burn) {
      om1 += p1;
      om2 += p2;
      ++kept;
    }
  }
  om1 /= kept;
  om2 /= kept;

  double gm1 = 0.0, gm2 = 0.0;
  const int reps = 200000;
  for (int r = 0; r < reps; ++r) {
    auto phi = sample_phi_posterior(theta, a, rng);
    gm1 += phi[0];
    gm2 += phi[1];
  }
  gm1 /= reps;
  gm2 /= reps;

  CHECK(std::abs(gm1 - om1) < 0.02);
  CHECK(std::abs(gm2 - om2) < 0.02);
  CHECK(std::abs((1.0 - gm1 - gm2) - (1.0 - om1 - om2)) < 0.02);
}

TEST_CASE("DL sweep leaves the two-coordinate posterior mean where Tweedie puts it") {
  // E[theta_j | y] = y_j + d/dy_j log m(y); m(y) mixes the Laplace-noise
  // marginals over phi ~ Beta(1/2,1/2) (phi = sin^2 w flattens the density)
  // and tau ~ Exp(1/2), which is the sampler's Gamma(na, 1/2) at n a = 1
  const std::vector<double> y{5.0, 0.0};
  auto log_m = [&](double y1, double y2) {
    double m = quad::integrate(
        [&](double w) {
          const double sw = std::sin(w), cw = std::cos(w);
          const double f1 = sw * sw, f2 = cw * cw;
          double inner = quad::integrate(
              [&](double tau) {
                return std::exp(std::log(0.5) - 0.5 * tau +
                                log_de_normal_marginal(y1, f1 * tau) +
                                log_de_normal_marginal(y2, f2 * tau));
              },
              1e-9, 250.0, 1e-9);
          return 2.0 / M_PI * inner;
        },
        1e-7, M_PI / 2.0 - 1e-7, 1e-8);
    return std::log(m);
  };
  const double h = 1e-3;
  const double oracle1 = y[0] + (log_m(y[0] + h, y[1]) - log_m(y[0] - h, y[1])) / (2.0 * h);
  const double oracle2 = y[1] + (log_m(y[0], y[1] + h) - log_m(y[0], y[1] - h)) / (2.0 * h);

  RngStream rng(606, 0);
  ChainState st = make_chain_state(y);
  double m1 = 0.0, m2 = 0.0;
  const int iters = 90000, burn = 10000;
  for (int it = 0; it < iters; ++it) {
    st = dl_gibbs_step(std::move(st), y, 0.5, rng);
    if (it >= burn) {
      m1 += st.theta[0];
      m2 += st.theta[1];
    }
  }
  m1 /= iters - burn;
  m2 /= iters - burn;

  INFO("oracle ", oracle1, ",", oracle2, " gibbs ", m1, ",", m2);
  CHECK(std::abs(m1 - oracle1) < 0.05);
  CHECK(std::abs(m2 - oracle2) < 0.05);
}

TEST_CASE("DL sweep with frozen tau targets the fixed-scale posterior") {
  const std::vector<double> y{2.0, 0.5};
  const double tau = 3.0;
  auto log_m = [&](double y1, double y2) {
    double m = quad::integrate(
        [&](double w) {
          const double sw = std::sin(w), cw = std::cos(w);
          return 2.0 / M_PI *
                 std::exp(log_de_normal_marginal(y1, sw * sw * tau) +
                          log_de_normal_marginal(y2, cw * cw * tau));
        },
        1e-7, M_PI / 2.0 - 1e-7, 1e-9);
    return std::log(m);
  };
  const double h = 1e-3;
  const double oracle1 = y[0] + (log_m(y[0] + h, y[1]) - log_m(y[0] - h, y[1])) / (2.0 * h);
  const double oracle2 = y[1] + (log_m(y[0], y[1] + h) - log_m(y[0], y[1] - h)) / (2.0 * h);

  RngStream rng(607, 0);
  ChainState st = make_chain_state(y);
  st.tau = tau;
  double m1 = 0.0, m2 = 0.0;
  const int iters = 90000, burn = 10000;
  for (int it = 0; it < iters; ++it) {
    st = dl_gibbs_step(std::move(st), y, 0.5, rng, false);
    CHECK(st.tau == tau);
    if (it >= burn) {
      m1 += st.theta[0];
      m2 += st.theta[1];
    }
  }
  m1 /= iters - burn;
  m2 /= iters - burn;

  INFO("oracle ", oracle1, ",", oracle2, " gibbs ", m1, ",", m2);
  CHECK(std::abs(m1 - oracle1) < 0.05);
  CHECK(std::abs(m2 - oracle2) < 0.05);
}

TEST_CASE("BL sweep with frozen tau matches the Laplace-mixture posterior mean") {
  // psi ~ Exp(1/2), tau = 1: E[theta | y] = y E_post[psi/(1+psi)]
  const double y0 = 4.0;
  double num = quad::integrate(
      [&](double v) {
        return v / (1.0 + v) * 0.5 * std::exp(-0.5 * v) *
               std::exp(-0.5 * y0 * y0 / (1.0 + v)) / std::sqrt(1.0 + v);
      },
      0.0, 400.0, 1e-10);
  double den = quad::integrate(
      [&](double v) {
        return 0.5 * std::exp(-0.5 * v) * std::exp(-0.5 * y0 * y0 / (1.0 + v)) /
               std::sqrt(1.0 + v);
      },
      0.0, 400.0, 1e-10);
  const double oracle = y0 * num / den;

  const std::vector<double> y{y0};
  RngStream rng(608, 0);
  ChainState st = make_chain_state(y);
  double mean = 0.0;
  const int iters = 60000, burn = 5000;
  for (int it = 0; it < iters; ++it) {
    st = bl_gibbs_step(std::move(st), y, rng, 0.5, false);
    if (it >= burn) mean += st.theta[0];
  }
  mean /= iters - burn;
  INFO("oracle ", oracle, " gibbs ", mean);
  CHECK(std::abs(mean - oracle) < 0.03);
}

TEST_CASE("HS sweep with frozen tau matches the half-Cauchy-mixture posterior mean") {
  // sqrt(psi) ~ Ca+(0,1), tau = 1; with lambda = tan u the marginal is
  // m(y) = (2/pi) int_0^{pi/2} phi(y; 0, sec^2 u) du
  const double y0 = 6.0;
  auto log_m = [&](double yy) {
    double m = quad::integrate(
        [&](double u) {
          const double cu = std::cos(u);
          return 2.0 / M_PI * cu * std::exp(-0.5 * yy * yy * cu * cu) /
                 std::sqrt(2.0 * M_PI);
        },
        0.0, M_PI / 2.0, 1e-11);
    return std::log(m);
  };
  const double h = 1e-3;
  const double oracle = y0 + (log_m(y0 + h) - log_m(y0 - h)) / (2.0 * h);

  const std::vector<double> y{y0};
  RngStream rng(609, 0);
  ChainState st = make_chain_state(y);
  double mean = 0.0;
  const int iters = 80000, burn = 5000;
  for (int it = 0; it < iters; ++it) {
    st = hs_gibbs_step(std::move(st), y, rng, false);
    if (it >= burn) mean += st.theta[0];
  }
  mean /= iters - burn;
  INFO("oracle ", oracle, " gibbs ", mean);
  CHECK(std::abs(mean - oracle) < 0.04);
}

TEST_CASE("every sampler keeps its state valid through long random runs") {
  RngStream data_rng(610, 0);
  const int n = 30;
  std::vector<double> y(n);
  for (int j = 0; j < n; ++j) {
    y[j] = (j % 5 == 0) ? 6.0 * data_rng.normal() : 0.3 * data_rng.normal();
  }
  RngStream rng(611, 0);

  ChainState dl = make_chain_state(y);
  ChainState bl = make_chain_state(y);
  ChainState hs = make_chain_state(y);
  for (int it = 0; it < 500; ++it) {
    dl = dl_gibbs_step(std::move(dl), y, 1.0 / n, rng);
    bl = bl_gibbs_step(std::move(bl), y, rng);
    hs = hs_gibbs_step(std::move(hs), y, rng);
    CHECK_NOTHROW(validate(dl));
    CHECK_NOTHROW(validate(bl));
    CHECK_NOTHROW(validate(hs));
  }

  // all-null data drives the deepest collapse; the sweep must stay finite
  std::vector<double> zeros(50, 0.0);
  ChainState deep = make_chain_state(zeros);
  for (int it = 0; it < 2000; ++it) {
    deep = dl_gibbs_step(std::move(deep), zeros, 1.0 / 50.0, rng);
  }
  CHECK_NOTHROW(validate(deep));

  CHECK_THROWS_AS(dl_gibbs_step(make_chain_state(y), zeros, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(dl_gibbs_step(make_chain_state(y), y, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(bl_gibbs_step(make_chain_state(y), y, rng, 0.0), std::invalid_argument);
}

TEST_CASE("point-mass slab evidence ratio matches quadrature") {
  PmPosterior post({3.0, 0.7, -1.2}, 0.3);
  for (int j = 0; j < 3; ++j) {
    const double yj = std::vector<double>{3.0, 0.7, -1.2}[static_cast<std::size_t>(j)];
    double m1 = quad::integrate(
                    [&](double t) {
                      return std::exp(-0.5 * (yj - t) * (yj - t)) / std::sqrt(2.0 * M_PI) *
                             0.5 * std::exp(-std::abs(t));
                    },
                    -45.0, 0.0, 1e-11) +
                quad::integrate(
                    [&](double t) {
                      return std::exp(-0.5 * (yj - t) * (yj - t)) / std::sqrt(2.0 * M_PI) *
                             0.5 * std::exp(-std::abs(t));
                    },
                    0.0, 45.0, 1e-11);
    const double log_oracle = std::log(m1) + 0.5 * yj * yj + 0.5 * std::log(2.0 * M_PI);
    CHECK(post.log_r(j) == doctest::Approx(log_oracle).epsilon(1e-8));
  }
}

TEST_CASE("point-mass posterior agrees with full enumeration") {
  const int n = 8;
  const double kappa = 0.3;
  RngStream rng(612, 0);
  std::vector<double> y(n);
  for (auto& v : y) v = 2.5 * rng.normal();
  PmPosterior post(y, kappa);

  const auto log_pi = complexity_prior_log_unnorm(n, kappa);
  std::vector<double> log_w(1u << n, 0.0);
  double log_z = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int s = 0;
    double lw = 0.0;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        ++s;
        lw += post.log_r(j);
      }
    }
    lw += log_pi[static_cast<std::size_t>(s)] -
          special::log_choose(n, static_cast<std::int64_t>(s));
    log_w[mask] = lw;
    log_z = special::log_sum_exp(log_z, lw);
  }

  double total = 0.0;
  std::vector<double> size_post(n + 1, 0.0);
  std::vector<double> incl(n, 0.0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const double p = std::exp(log_w[mask] - log_z);
    total += p;
    int s = 0;
    std::vector<int> support;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        ++s;
        incl[j] += p;
        support.push_back(j);
      }
    }
    size_post[static_cast<std::size_t>(s)] += p;
    CHECK(post.log_support_posterior(support) ==
          doctest::Approx(log_w[mask] - log_z).epsilon(1e-10));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (int s = 0; s <= n; ++s) {
    CHECK(std::exp(post.log_size_posterior(s)) ==
          doctest::Approx(size_post[static_cast<std::size_t>(s)]).epsilon(1e-10));
  }
  for (int j = 0; j < n; ++j) {
    CHECK(post.inclusion_prob(j) == doctest::Approx(incl[j]).epsilon(1e-10));
  }
}

TEST_CASE("point-mass coordinate medians satisfy the mixed CDF equation") {
  const std::vector<double> y{6.0, 2.0, 0.3, -4.5};
  PmPosterior post(y, 0.4);

  auto slab_piece = [&](double yj, double lo, double hi) {
    if (hi <= lo) return 0.0;
    return quad::integrate(
        [&](double t) {
          return std::exp(-0.5 * (yj - t) * (yj - t) - std::abs(t));
        },
        lo, hi, 1e-12);
  };
  for (int j = 0; j < 4; ++j) {
    const double yj = y[static_cast<std::size_t>(j)];
    const double p = post.inclusion_prob(j);
    const double z = slab_piece(yj, -45.0, 0.0) + slab_piece(yj, 0.0, 45.0);
    auto cdf = [&](double m) {
      double f = (slab_piece(yj, -45.0, std::min(m, 0.0)) +
                  slab_piece(yj, 0.0, std::max(m, 0.0))) /
                 z;
      return p * f + (m >= 0.0 ? 1.0 - p : 0.0);
    };
    const double med = post.coordinate_median(j);
    if (med == 0.0) {
      CHECK(cdf(-1e-9) <= 0.5 + 1e-9);
      CHECK(cdf(1e-9) >= 0.5 - 1e-9);
    } else {
      // solve the same equation by bisection on the quadrature CDF
      double lo = -50.0, hi = 50.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < 0.5 ? lo : hi) = mid;
      }
      CHECK(med == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-5));
    }
  }
  CHECK(post.inclusion_prob(0) > 0.98);
  CHECK(post.inclusion_prob(2) < post.inclusion_prob(0));
  CHECK(post.inclusion_prob(2) < post.inclusion_prob(3));
  CHECK(post.coordinate_median(2) == 0.0);
  CHECK(post.coordinate_median(3) < -3.0);
}

TEST_CASE("support sampling frequencies track the exact support posterior") {
  const std::vector<double> y{3.0, 1.0, 0.0, -2.0, 0.5};
  PmPosterior post(y, 0.4);
  RngStream rng(613, 0);
  const int reps = 30000;
  std::vector<int> count(32, 0);
  for (int r = 0; r < reps; ++r) {
    auto s = post.sample_support(rng);
    CHECK(std::is_sorted(s.begin(), s.end()));
    std::uint32_t mask = 0;
    for (int j : s) mask |= 1u << j;
    ++count[mask];
  }
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    std::vector<int> support;
    for (int j = 0; j < 5; ++j) {
      if (mask & (1u << j)) support.push_back(j);
    }
    const double p = std::exp(post.log_support_posterior(support));
    const double freq = static_cast<double>(count[mask]) / reps;
    const double se = std::sqrt(std::max(p * (1.0 - p) / reps, 1e-12));
    INFO("mask=", mask, " p=", p, " freq=", freq);
    CHECK(std::abs(freq - p) < 5.0 * se + 2e-3);
  }
}

TEST_CASE("point-mass fit wrapper and the all-null configuration") {
  RngStream rng(614, 0);
  std::vector<double> y(20, 0.0);
  FitSummary fit = pm_exact_posterior(y, 0.1, rng);
  CHECK(fit.method == "PM");
  CHECK(fit.kept_draws == 0);
  CHECK(std::isnan(fit.squared_error));
  REQUIRE(fit.posterior_median.size() == 20);
  PmPosterior post(y, 0.1);
  for (int j = 0; j < 20; ++j) {
    CHECK(fit.posterior_median[static_cast<std::size_t>(j)] == post.coordinate_median(j));
    CHECK(post.coordinate_median(j) == 0.0);
    CHECK(post.inclusion_prob(j) < 0.5);
  }
  // the empty support is modal under all-null data
  for (int s = 1; s <= 20; ++s) {
    CHECK(post.log_size_posterior(0) > post.log_size_posterior(s));
  }

  CHECK_THROWS_AS(PmPosterior({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(post.log_support_posterior({3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(post.log_support_posterior({25}), std::invalid_argument);
}

TEST_CASE("soft threshold closed form") {
  auto out = lasso_soft_threshold({3.0, -0.5, 1.2, 0.0}, 1.0);
  REQUIRE(out.size() == 4);
  CHECK(out[0] == doctest::Approx(2.0));
  CHECK(out[1] == 0.0);
  CHECK(out[2] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(out[3] == 0.0);
  CHECK_THROWS_AS(lasso_soft_threshold({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lasso_soft_threshold({1.0}, -2.0), std::invalid_argument);
}

TEST_CASE("run_chain bookkeeping, determinism, and method tags") {
  std::vector<double> y{4.0, -2.0, 0.0, 0.3, 7.0};
  SparseTruth truth{5, {0, 4}, {4.0, 7.0}};
  McmcConfig cfg;
  cfg.n_iter = 400;
  cfg.n_burnin = 100;
  cfg.thin = 3;
  cfg.seed = 99;

  FitSummary a = run_chain(DirichletLaplace{0.2, ExponentialPrior{0.5}}, y, cfg, truth);
  CHECK(a.method == "DL:1/n");
  CHECK(a.kept_draws == 100);  // ceil(300 / 3)
  double se = 0.0;
  const auto dense = truth.dense();
  for (std::size_t j = 0; j < 5; ++j) {
    const double d = a.posterior_median[j] - dense[j];
    se += d * d;
  }
  CHECK(a.squared_error == doctest::Approx(se).epsilon(1e-12));

  FitSummary b = run_chain(DirichletLaplace{0.2, ExponentialPrior{0.5}}, y, cfg, truth);
  CHECK(a.posterior_median == b.posterior_median);
  CHECK(a.squared_error == b.squared_error);

  McmcConfig other = cfg;
  other.seed = 100;
  FitSummary c = run_chain(DirichletLaplace{0.2, ExponentialPrior{0.5}}, y, other, truth);
  CHECK(a.posterior_median != c.posterior_median);

  FitSummary no_truth = run_chain(GlobalLocal{HalfCauchyPrior{}, 0.5}, y, cfg);
  CHECK(no_truth.method == "BL");
  CHECK(std::isnan(no_truth.squared_error));

  CHECK(run_chain(DirichletLaplace{0.5, ExponentialPrior{0.5}}, y, cfg).method == "DL:1/2");
  CHECK(run_chain(DirichletLaplace{0.3, ExponentialPrior{0.5}}, y, cfg).method == "DL:0.3");
  CHECK(run_chain(Horseshoe{HalfCauchyPrior{}}, y, cfg).method == "HS");

  CHECK_THROWS_AS(run_chain(IidNormal{1.0}, y, cfg), std::invalid_argument);
  SparseTruth wrong{4, {0}, {4.0}};
  CHECK_THROWS_AS(run_chain(Horseshoe{HalfCauchyPrior{}}, y, cfg, wrong),
                  std::invalid_argument);
  McmcConfig bad = cfg;
  bad.n_burnin = bad.n_iter;
  CHECK_THROWS_AS(run_chain(Horseshoe{HalfCauchyPrior{}}, y, bad), std::invalid_argument);
}

TEST_CASE("run_chain with a deterministic tau prior pins the global scale") {
  // with tau frozen at a tiny value everything shrinks to near zero even at y = 8
  std::vector<double> y{8.0, -8.0};
  McmcConfig cfg;
  cfg.n_iter = 2000;
  cfg.n_burnin = 500;
  cfg.seed = 7;
  FitSummary tight = run_chain(GlobalLocal{Deterministic{1e-6}, 0.5}, y, cfg);
  CHECK(std::abs(tight.posterior_median[0]) < 0.2);
  CHECK(std::abs(tight.posterior_median[1]) < 0.2);

  FitSummary free = run_chain(GlobalLocal{HalfCauchyPrior{}, 0.5}, y, cfg);
  CHECK(free.posterior_median[0] > 5.0);
  CHECK(free.posterior_median[1] < -5.0);
}

TEST_CASE("run_chain is sign-equivariant in distribution") {
  std::vector<double> y{4.0, -2.0, 0.0};
  std::vector<double> neg{-4.0, 2.0, 0.0};
  McmcConfig cfg;
  cfg.n_iter = 8000;
  cfg.n_burnin = 2000;
  cfg.seed = 21;
  FitSummary a = run_chain(DirichletLaplace{1.0 / 3.0, ExponentialPrior{0.5}}, y, cfg);
  cfg.seed = 22;
  FitSummary b = run_chain(DirichletLaplace{1.0 / 3.0, ExponentialPrior{0.5}}, neg, cfg);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(a.posterior_median[j] + b.posterior_median[j]) < 0.25);
  }
}
