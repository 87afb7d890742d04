#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shrinkage/concentration.hpp"
#include "shrinkage/experiment.hpp"
#include "shrinkage/priors.hpp"
#include "shrinkage/samplers.hpp"
#include "shrinkage/verify.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string hex16(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::string tok;
  for (const char c : text + ",") {
    if (c == ',' || c == '\n' || c == '\r' || c == '\t' || c == ' ' || c == ';') {
      if (!tok.empty()) {
        out.push_back(std::stod(tok));
        tok.clear();
      }
    } else {
      tok += c;
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const double v : parse_doubles(text)) out.push_back(static_cast<int>(v));
  return out;
}

struct PriorArgs {
  std::string tag = "dl";
  int n = 100;
  double a = -1.0;  // <=0 means 1/n
  double variance = 1.0;
  std::string tau_kind = "";  // per-tag default when empty
  double rate = 0.5;
  double alpha = 1.0;
  double beta = 1.0;
  double tau = 1.0;
  double kappa = 0.1;
  double local_rate = 0.5;
};

void add_prior_flags(CLI::App* cmd, PriorArgs& p) {
  cmd->add_option("--prior", p.tag,
                  "prior tag: iid | global | bl | dl | hs | pm (concentration also takes dl-vs-bl)");
  cmd->add_option("--n", p.n, "dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--a", p.a, "DL Dirichlet parameter (default 1/n)");
  cmd->add_option("--variance", p.variance, "iid prior variance");
  cmd->add_option("--tau-prior", p.tau_kind, "half-cauchy | exp | inv-gamma | fixed");
  cmd->add_option("--rate", p.rate, "exponential tau prior rate");
  cmd->add_option("--alpha", p.alpha, "inverse-gamma tau prior shape");
  cmd->add_option("--beta", p.beta, "inverse-gamma tau prior scale");
  cmd->add_option("--tau", p.tau, "fixed tau value");
  cmd->add_option("--kappa", p.kappa, "point-mass complexity parameter");
  cmd->add_option("--local-rate", p.local_rate, "global-local exponential local rate");
}

shrinkage::TauPrior make_tau_prior(const PriorArgs& p, const std::string& fallback) {
  const std::string kind = p.tau_kind.empty() ? fallback : p.tau_kind;
  if (kind == "half-cauchy") return shrinkage::HalfCauchyPrior{};
  if (kind == "exp") return shrinkage::ExponentialPrior{p.rate};
  if (kind == "inv-gamma") return shrinkage::InverseGamma{p.alpha, p.beta};
  if (kind == "fixed") return shrinkage::Deterministic{p.tau};
  throw std::invalid_argument("unknown tau prior: " + kind);
}

shrinkage::PriorSpec make_prior(const PriorArgs& p) {
  if (p.tag == "iid") return shrinkage::IidNormal{p.variance};
  if (p.tag == "global") return shrinkage::GlobalOnly{make_tau_prior(p, "half-cauchy")};
  if (p.tag == "bl") {
    return shrinkage::GlobalLocal{make_tau_prior(p, "half-cauchy"), p.local_rate};
  }
  if (p.tag == "dl") {
    const double a = p.a > 0.0 ? p.a : 1.0 / p.n;
    return shrinkage::DirichletLaplace{a, make_tau_prior(p, "exp")};
  }
  if (p.tag == "hs") return shrinkage::Horseshoe{make_tau_prior(p, "half-cauchy")};
  if (p.tag == "pm") return shrinkage::PointMassMixture{p.kappa};
  throw std::invalid_argument("unknown prior tag: " + p.tag);
}

ordered_json prior_json(const PriorArgs& p) {
  ordered_json j;
  j["tag"] = p.tag;
  if (p.tag == "iid") {
    j["variance"] = p.variance;
    return j;
  }
  if (p.tag == "pm") {
    j["kappa"] = p.kappa;
    return j;
  }
  if (p.tag == "dl" || p.tag == "dl-vs-bl") j["a"] = p.a > 0.0 ? p.a : 1.0 / p.n;
  if (p.tag == "bl" || p.tag == "dl-vs-bl") j["local_rate"] = p.local_rate;
  std::string kind = p.tau_kind;
  if (kind.empty()) kind = (p.tag == "dl" || p.tag == "dl-vs-bl") ? "exp" : "half-cauchy";
  j["tau_prior"] = kind;
  if (kind == "exp") j["rate"] = p.rate;
  if (kind == "inv-gamma") {
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
  }
  if (kind == "fixed") j["tau"] = p.tau;
  return j;
}

ordered_json estimate_json(const shrinkage::ConcentrationEstimate& est) {
  ordered_json j;
  j["log_prob"] = est.log_prob;  // non-finite serializes as null
  j["ci_low"] = est.ci_low;
  j["ci_high"] = est.ci_high;
  j["method"] = est.method;
  j["n_samples"] = est.n_samples;
  j["zero_hits"] = est.zero_hits;
  return j;
}

shrinkage::SparseTruth make_theta0(int n, const std::string& support_csv,
                                   const std::string& values_csv) {
  shrinkage::SparseTruth t;
  t.n = n;
  t.support = parse_ints(support_csv);
  t.values = parse_doubles(values_csv);
  if (t.values.size() == 1 && t.support.size() > 1) {
    t.values.assign(t.support.size(), t.values[0]);
  }
  if (t.support.size() != t.values.size()) {
    throw std::invalid_argument("--support and --values must have matching lengths");
  }
  return t;
}

int run_replicate(const std::string& design, const std::string& config_path,
                  std::optional<std::uint64_t> seed, std::optional<int> workers,
                  const std::string& out) {
  shrinkage::ExperimentConfig cfg = shrinkage::default_config(design);
  if (!config_path.empty()) shrinkage::apply_config_json(cfg, read_file(config_path));
  cfg.design = design;
  if (seed) cfg.base_seed = *seed;
  if (workers) cfg.workers = *workers;
  if (!out.empty()) cfg.out = out;
  shrinkage::validate_config(cfg);
  const std::vector<shrinkage::ResultRow> rows = shrinkage::run_experiment(cfg);
  write_output(cfg.out, shrinkage::results_csv(cfg, rows));
  return 0;
}

int run_concentration(const PriorArgs& p, const std::string& support_csv,
                      const std::string& values_csv, double t, double delta,
                      const std::string& estimator, std::int64_t samples, std::uint64_t seed,
                      int workers, double confidence, const std::string& out) {
  if (t < 0.0 && delta < 0.0) throw std::invalid_argument("pass --t or --delta");
  const double radius = t >= 0.0 ? t : std::pow(static_cast<double>(p.n), delta / 2.0);

  shrinkage::Estimator est_kind;
  if (estimator == "mc") {
    est_kind = shrinkage::Estimator::monte_carlo;
  } else if (estimator == "quadrature") {
    est_kind = shrinkage::Estimator::quadrature;
  } else if (estimator == "chi2") {
    est_kind = shrinkage::Estimator::chi_square_exact;
  } else {
    throw std::invalid_argument("unknown estimator: " + estimator);
  }

  shrinkage::ConcentrationQuery q;
  q.theta0 = make_theta0(p.n, support_csv, values_csv);
  q.radius = radius;

  ordered_json j;
  j["n"] = p.n;
  j["t"] = radius;
  j["theta0_norm"] = std::sqrt(q.theta0.squared_norm());
  j["estimator"] = estimator;
  j["prior"] = prior_json(p);
  if (est_kind == shrinkage::Estimator::monte_carlo) j["samples"] = samples;

  const auto estimate = [&](const shrinkage::ConcentrationQuery& query) {
    if (est_kind == shrinkage::Estimator::monte_carlo) {
      return shrinkage::concentration_mc(query, samples, shrinkage::RngStream(seed, 0), workers,
                                         confidence);
    }
    return shrinkage::estimate_concentration(query, est_kind, samples,
                                             shrinkage::RngStream(seed, 0), workers);
  };

  if (p.tag == "dl-vs-bl") {
    PriorArgs pd = p;
    pd.tag = "dl";
    PriorArgs pb = p;
    pb.tag = "bl";
    shrinkage::ConcentrationQuery qd = q;
    qd.spec = make_prior(pd);
    shrinkage::ConcentrationQuery qb = q;
    qb.spec = make_prior(pb);
    const auto dl = estimate(qd);
    const auto bl = estimate(qb);
    j["dl"] = estimate_json(dl);
    j["bl"] = estimate_json(bl);
    j["log_ratio"] = dl.log_prob - bl.log_prob;
    j["ratio"] = std::exp(dl.log_prob - bl.log_prob);
  } else {
    q.spec = make_prior(p);
    j["estimate"] = estimate_json(estimate(q));
  }
  j["zero_ball"] = (radius == 0.0);
  j["seed"] = seed;
  ordered_json key = j;
  key.erase("seed");
  j["config_hash"] = hex16(shrinkage::fnv1a64(key.dump()));
  write_output(out, j.dump(2) + "\n");
  return 0;
}

int run_fit(const std::string& input, const std::string& method, std::uint64_t seed, int n_iter,
            int n_burnin, int thin, double kappa, const std::string& out) {
  std::vector<double> y = parse_doubles(read_file(input));
  if (y.empty()) throw std::invalid_argument("no y values in " + input);
  const int n = static_cast<int>(y.size());

  ordered_json j;
  j["method"] = method;
  j["n"] = n;
  j["seed"] = seed;

  if (method == "LS") {
    const double lam = std::sqrt(2.0 * std::log(static_cast<double>(n)));
    j["lambda"] = lam;
    j["posterior_median"] = shrinkage::lasso_soft_threshold(y, lam);
    j["kept_draws"] = 0;
  } else if (method == "PM") {
    shrinkage::RngStream rng(seed, 0);
    const shrinkage::FitSummary fit = shrinkage::pm_exact_posterior(y, kappa, rng);
    j["kappa"] = kappa;
    j["posterior_median"] = fit.posterior_median;
    j["kept_draws"] = fit.kept_draws;
  } else {
    shrinkage::McmcConfig cfg;
    cfg.n_iter = n_iter;
    cfg.n_burnin = n_burnin;
    cfg.thin = thin;
    cfg.seed = seed;
    cfg.stream_id = 0;
    const shrinkage::FitSummary fit =
        shrinkage::run_chain(shrinkage::method_prior(method, n), y, cfg);
    j["mcmc"] = {{"n_iter", n_iter}, {"n_burnin", n_burnin}, {"thin", thin}};
    j["posterior_median"] = fit.posterior_median;
    j["kept_draws"] = fit.kept_draws;
  }
  ordered_json key = j;
  key.erase("posterior_median");
  j["config_hash"] = hex16(shrinkage::fnv1a64(key.dump()));
  write_output(out, j.dump(2) + "\n");
  return 0;
}

int run_sample_prior(const PriorArgs& p, std::int64_t draws, std::uint64_t seed,
                     const std::string& out) {
  const shrinkage::PriorSpec spec = make_prior(p);
  shrinkage::RngStream rng(seed, 0);
  std::ostringstream csv;
  ordered_json key = prior_json(p);
  key["n"] = p.n;
  key["draws"] = draws;
  csv << "# config_hash=" << hex16(shrinkage::fnv1a64(key.dump())) << " seed=" << seed << "\n";
  char buf[64];
  for (std::int64_t d = 0; d < draws; ++d) {
    const std::vector<double> theta = shrinkage::sample_theta_prior(spec, p.n, rng);
    for (int jx = 0; jx < p.n; ++jx) {
      std::snprintf(buf, sizeof(buf), "%.10g", theta[static_cast<std::size_t>(jx)]);
      csv << (jx ? "," : "") << buf;
    }
    csv << "\n";
  }
  write_output(out, csv.str());
  return 0;
}

int run_verify(std::uint64_t seed, bool perturb, const std::string& out) {
  const std::vector<shrinkage::VerificationReport> reports =
      shrinkage::run_verification_suite(seed, perturb);
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json jr;
    jr["name"] = r.name;
    jr["lhs"] = r.lhs;
    jr["rhs"] = r.rhs;
    jr["tolerance"] = r.tolerance;
    jr["pass"] = r.pass;
    jr["comparison"] = r.comparison;
    jr["method"] = r.method;
    arr.push_back(jr);
  }
  const bool ok = shrinkage::all_pass(reports);
  ordered_json j;
  j["seed"] = seed;
  j["perturb"] = perturb;
  j["all_pass"] = ok;
  j["checks"] = arr;
  ordered_json key;
  key["seed"] = seed;
  key["perturb"] = perturb;
  j["config_hash"] = hex16(shrinkage::fnv1a64(key.dump()));
  write_output(out, j.dump(2) + "\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-Laplace shrinkage batch tool"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed_opt;
  std::optional<int> workers_opt;

  auto* t1 = app.add_subcommand("replicate-table1", "sparse normal-means squared-error benchmark");
  auto* t2 = app.add_subcommand("replicate-table2", "large-n two-block benchmark");
  for (auto* cmd : {t1, t2}) {
    cmd->add_option("--config", config_path, "JSON config overriding any field");
    cmd->add_option("--seed", seed_opt, "base seed override");
    cmd->add_option("--workers", workers_opt, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "output CSV path (default stdout)");
  }

  auto* conc = app.add_subcommand("concentration", "prior small-ball probability");
  PriorArgs cp;
  std::string support_csv, values_csv;
  double t_arg = -1.0, delta_arg = -1.0, confidence = 0.99;
  std::string estimator = "mc";
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0;
  int workers = 1;
  add_prior_flags(conc, cp);
  conc->add_option("--support", support_csv, "theta0 support indices, comma separated");
  conc->add_option("--values", values_csv, "theta0 values on the support");
  conc->add_option("--t", t_arg, "ball radius");
  conc->add_option("--delta", delta_arg, "radius exponent: t = n^(delta/2)");
  conc->add_option("--estimator", estimator, "mc | quadrature | chi2");
  conc->add_option("--samples", samples, "MC sample count")->check(CLI::PositiveNumber);
  conc->add_option("--seed", seed, "RNG seed");
  conc->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  conc->add_option("--confidence", confidence, "CI level for MC");
  conc->add_option("--out", out, "output JSON path (default stdout)");

  auto* fit = app.add_subcommand("fit", "fit one dataset from a CSV of y values");
  std::string input, method = "DL:1/n";
  int n_iter = 3000, n_burnin = 1000, thin = 1;
  double kappa = 0.1;
  fit->add_option("--input", input, "CSV of y values")->required();
  fit->add_option("--method", method, "BL | HS | PM | LS | DL:1/n | DL:1/2 | DL:<a>");
  fit->add_option("--seed", seed, "RNG seed");
  fit->add_option("--iters", n_iter, "MCMC iterations");
  fit->add_option("--burnin", n_burnin, "MCMC burn-in");
  fit->add_option("--thin", thin, "MCMC thinning");
  fit->add_option("--kappa", kappa, "PM complexity parameter");
  fit->add_option("--out", out, "output JSON path (default stdout)");

  auto* sp = app.add_subcommand("sample-prior", "draw theta vectors from a prior");
  PriorArgs pp;
  std::int64_t draws = 100;
  add_prior_flags(sp, pp);
  sp->add_option("--draws", draws, "number of draws")->check(CLI::PositiveNumber);
  sp->add_option("--seed", seed, "RNG seed");
  sp->add_option("--out", out, "output CSV path (default stdout)");

  auto* vm = app.add_subcommand("verify-math", "run the numeric verification suite");
  bool perturb = false;
  std::uint64_t vm_seed = 20240817;
  vm->add_option("--seed", vm_seed, "suite seed");
  vm->add_flag("--perturb", perturb, "negative control: perturb one check");
  vm->add_option("--out", out, "output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (t1->parsed()) return run_replicate("table1", config_path, seed_opt, workers_opt, out);
    if (t2->parsed()) return run_replicate("table2", config_path, seed_opt, workers_opt, out);
    if (conc->parsed()) {
      return run_concentration(cp, support_csv, values_csv, t_arg, delta_arg, estimator, samples,
                               seed, workers, confidence, out);
    }
    if (fit->parsed()) return run_fit(input, method, seed, n_iter, n_burnin, thin, kappa, out);
    if (sp->parsed()) return run_sample_prior(pp, draws, seed, out);
    if (vm->parsed()) return run_verify(vm_seed, perturb, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
