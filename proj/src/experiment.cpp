#include "shrinkage/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace shrinkage {

namespace {

constexpr std::uint64_t kDataSlot = 0x9e3779b97f4a7c15ULL;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig default_config(const std::string& design) {
  ExperimentConfig cfg;
  cfg.design = design;
  if (design == "table1" || design == "custom") {
    cfg.n = 100;
    cfg.q_n = 5;
    cfg.signal = {7.0};
    cfg.methods = {"DL:1/n", "BL", "HS", "PM", "LS"};
    cfg.replicates = 20;
  } else if (design == "table2") {
    cfg.n = 1000;
    cfg.q_n = 100;
    cfg.signal = {3.0, 7.0};
    cfg.methods = {"DL:1/n", "DL:1/2", "BL", "HS"};
    cfg.replicates = 10;
  } else {
    throw std::invalid_argument("default_config: unknown design " + design);
  }
  return cfg;
}

void apply_config_json(ExperimentConfig& cfg, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "design") {
      cfg.design = value.get<std::string>();
    } else if (key == "n") {
      cfg.n = value.get<int>();
    } else if (key == "q_n") {
      cfg.q_n = value.get<int>();
    } else if (key == "signal" || key == "A") {
      cfg.signal.clear();
      if (value.is_array()) {
        for (const auto& v : value) cfg.signal.push_back(v.get<double>());
      } else {
        cfg.signal.push_back(value.get<double>());
      }
    } else if (key == "methods") {
      cfg.methods = value.get<std::vector<std::string>>();
    } else if (key == "replicates") {
      cfg.replicates = value.get<int>();
    } else if (key == "mcmc") {
      if (!value.is_object()) throw std::invalid_argument("config: mcmc must be an object");
      for (const auto& [mk, mv] : value.items()) {
        if (mk == "n_iter") {
          cfg.mcmc.n_iter = mv.get<int>();
        } else if (mk == "n_burnin") {
          cfg.mcmc.n_burnin = mv.get<int>();
        } else if (mk == "thin") {
          cfg.mcmc.thin = mv.get<int>();
        } else {
          throw std::invalid_argument("config: unknown mcmc key " + mk);
        }
      }
    } else if (key == "base_seed") {
      cfg.base_seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      cfg.out = value.get<std::string>();
    } else if (key == "workers") {
      cfg.workers = value.get<int>();
    } else {
      throw std::invalid_argument("config: unknown key " + key);
    }
  }
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.design != "table1" && cfg.design != "table2" && cfg.design != "custom") {
    throw std::invalid_argument("config: design must be table1, table2, or custom");
  }
  if (cfg.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (cfg.design == "table2") {
    if (cfg.n < 100 || cfg.n % 100 != 0) {
      throw std::invalid_argument("config: table2 needs n a positive multiple of 100");
    }
  } else {
    if (cfg.q_n < 0 || cfg.q_n > cfg.n) throw std::invalid_argument("config: need 0 <= q_n <= n");
  }
  if (cfg.signal.empty()) throw std::invalid_argument("config: signal must be nonempty");
  if (cfg.methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
  for (const auto& m : cfg.methods) {
    if (m == "BL" || m == "HS" || m == "PM" || m == "LS") continue;
    dl_a_from_tag(m, cfg.n);
  }
  if (cfg.replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  validate(cfg.mcmc);
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["design"] = cfg.design;
  j["n"] = cfg.n;
  j["q_n"] = cfg.q_n;
  j["signal"] = cfg.signal;
  j["methods"] = cfg.methods;
  j["replicates"] = cfg.replicates;
  j["mcmc"] = {{"n_iter", cfg.mcmc.n_iter},
               {"n_burnin", cfg.mcmc.n_burnin},
               {"thin", cfg.mcmc.thin}};
  j["base_seed"] = cfg.base_seed;
  return fnv1a64(j.dump());
}

SparseTruth table1_truth(int n, int q, double A) {
  SparseTruth t;
  t.n = n;
  for (int j = 0; j < q; ++j) {
    t.support.push_back(j);
    t.values.push_back(A);
  }
  return t;
}

SparseTruth table2_truth(int n, double A) {
  SparseTruth t;
  t.n = n;
  const int big = n / 100;
  const int all = n / 10;
  for (int j = 0; j < big; ++j) {
    t.support.push_back(j);
    t.values.push_back(10.0);
  }
  for (int j = big; j < all; ++j) {
    t.support.push_back(j);
    t.values.push_back(A);
  }
  return t;
}

SparseTruth design_truth(const ExperimentConfig& cfg, double A) {
  if (cfg.design == "table2") return table2_truth(cfg.n, A);
  return table1_truth(cfg.n, cfg.q_n, A);
}

bool is_mcmc_method(const std::string& tag) {
  return tag == "BL" || tag == "HS" || tag.rfind("DL:", 0) == 0;
}

double dl_a_from_tag(const std::string& tag, int n) {
  if (tag.rfind("DL:", 0) != 0) throw std::invalid_argument("not a DL method tag: " + tag);
  const std::string spec = tag.substr(3);
  double a;
  if (spec == "1/n") {
    a = 1.0 / n;
  } else if (spec == "1/2") {
    a = 0.5;
  } else {
    std::size_t used = 0;
    try {
      a = std::stod(spec, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad DL method tag: " + tag);
    }
    if (used != spec.size()) throw std::invalid_argument("bad DL method tag: " + tag);
  }
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("DL a must lie in (0,1]: " + tag);
  return a;
}

PriorSpec method_prior(const std::string& tag, int n) {
  if (tag == "BL") return GlobalLocal{HalfCauchyPrior{}, 0.5};
  if (tag == "HS") return Horseshoe{HalfCauchyPrior{}};
  return DirichletLaplace{dl_a_from_tag(tag, n), ExponentialPrior{0.5}};
}

ResultRow fit_one(const std::string& tag, const std::vector<double>& y, const SparseTruth& truth,
                  const McmcConfig& mcmc, std::uint64_t chain_seed, double A, int q,
                  int replicate) {
  ResultRow row;
  row.method = tag;
  row.n = static_cast<int>(y.size());
  row.q = q;
  row.A = A;
  row.replicate = replicate;
  row.seed = chain_seed;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (tag == "LS") {
      const double lam = std::sqrt(2.0 * std::log(static_cast<double>(y.size())));
      const std::vector<double> est = lasso_soft_threshold(y, lam);
      const std::vector<double> t = truth.dense();
      double se = 0.0;
      for (std::size_t j = 0; j < est.size(); ++j) {
        const double d = est[j] - t[j];
        se += d * d;
      }
      row.sq_error = se;
    } else if (tag == "PM") {
      RngStream rng(chain_seed, 0);
      const FitSummary fit = pm_exact_posterior(y, 0.1, rng);
      const std::vector<double> t = truth.dense();
      double se = 0.0;
      for (std::size_t j = 0; j < fit.posterior_median.size(); ++j) {
        const double d = fit.posterior_median[j] - t[j];
        se += d * d;
      }
      row.sq_error = se;
    } else {
      McmcConfig c = mcmc;
      c.seed = chain_seed;
      c.stream_id = 0;
      const FitSummary fit = run_chain(method_prior(tag, row.n), y, c, truth);
      row.sq_error = fit.squared_error;
    }
  } catch (const std::exception& e) {
    row.sq_error = kNaN;
    row.note = e.what();
  }
  const auto t1 = std::chrono::steady_clock::now();
  row.seconds = std::chrono::duration<double>(t1 - t0).count();
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_cells = cfg.signal.size() * static_cast<std::size_t>(cfg.replicates);
  std::vector<ResultRow> rows(n_cells * n_methods);

  const RngStream base(cfg.base_seed, 0);

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= n_cells) return;
      const std::size_t a_idx = cell / static_cast<std::size_t>(cfg.replicates);
      const int rep = static_cast<int>(cell % static_cast<std::size_t>(cfg.replicates));
      const double A = cfg.signal[a_idx];
      const SparseTruth truth = design_truth(cfg, A);
      const int q = static_cast<int>(truth.support.size());

      // Data depend on (A, replicate) only, never on the method list.
      RngStream rep_stream = base.split(static_cast<std::uint64_t>(cell));
      RngStream data = rep_stream.split(kDataSlot);
      std::vector<double> y = truth.dense();
      for (auto& v : y) v += data.normal();

      for (std::size_t m = 0; m < n_methods; ++m) {
        const std::string& tag = cfg.methods[m];
        const std::uint64_t chain_seed = rep_stream.split(fnv1a64(tag)).key();
        rows[cell * n_methods + m] = fit_one(tag, y, truth, cfg.mcmc, chain_seed, A, q, rep);
      }
    }
  };

  const int n_threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n_cells));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::string results_csv(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  out << "# config_hash=" << buf << " seed=" << cfg.base_seed << "\n";
  out << "method,n,q,A,replicate,sq_error,seconds,seed\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.n << ',' << r.q << ',' << fmt("%.10g", r.A) << ',' << r.replicate
        << ',' << fmt("%.10g", r.sq_error) << ',' << fmt("%.3f", r.seconds) << ',' << r.seed
        << "\n";
  }
  for (std::size_t a_idx = 0; a_idx < cfg.signal.size(); ++a_idx) {
    for (const auto& tag : cfg.methods) {
      double sum = 0.0;
      int ok = 0;
      int fail = 0;
      for (const auto& r : rows) {
        if (r.method != tag || r.A != cfg.signal[a_idx]) continue;
        if (std::isnan(r.sq_error)) {
          ++fail;
        } else {
          sum += r.sq_error;
          ++ok;
        }
      }
      out << "# aggregate method=" << tag << " A=" << fmt("%.10g", cfg.signal[a_idx])
          << " mean_sq_error=" << fmt("%.10g", ok > 0 ? sum / ok : kNaN) << " n_ok=" << ok
          << " n_fail=" << fail << "\n";
    }
  }
  return out.str();
}

}  // namespace shrinkage
