#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shrinkage/priors.hpp"
#include "shrinkage/samplers.hpp"

namespace shrinkage {

struct ExperimentConfig {
  std::string design = "table1";  // table1 | table2 | custom
  int n = 100;
  int q_n = 5;                       // table1/custom support size; table2 derives n/10
  std::vector<double> signal;        // A values; table1/custom use each in turn
  std::vector<std::string> methods;  // BL | HS | PM | LS | DL:1/n | DL:1/2 | DL:<a>
  int replicates = 20;
  McmcConfig mcmc;
  std::uint64_t base_seed = 42;
  std::string out;  // empty = stdout
  int workers = 1;
};

struct ResultRow {
  std::string method;
  int n = 0;
  int q = 0;
  double A = 0.0;
  int replicate = 0;
  double sq_error = 0.0;  // NaN on per-replicate failure
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::string note;  // failure description, not written to the CSV
};

std::uint64_t fnv1a64(std::string_view s);

ExperimentConfig default_config(const std::string& design);
// Strict field-wise overlay of a JSON object onto cfg; unknown keys error.
void apply_config_json(ExperimentConfig& cfg, const std::string& json_text);
void validate_config(const ExperimentConfig& cfg);

// Hash of the scientific fields only (out/workers excluded so the same study
// hashes identically no matter where it is written or how it is scheduled).
std::uint64_t config_hash(const ExperimentConfig& cfg);

SparseTruth table1_truth(int n, int q, double A);
SparseTruth table2_truth(int n, double A);
SparseTruth design_truth(const ExperimentConfig& cfg, double A);

bool is_mcmc_method(const std::string& tag);
double dl_a_from_tag(const std::string& tag, int n);  // throws for non-DL tags
PriorSpec method_prior(const std::string& tag, int n);

// One method on one dataset; chain_seed is the stream key material reported in
// the seed column. Never throws: failures come back as NaN rows with a note.
ResultRow fit_one(const std::string& tag, const std::vector<double>& y, const SparseTruth& truth,
                  const McmcConfig& mcmc, std::uint64_t chain_seed, double A, int q,
                  int replicate);

// All replicates x methods x signal levels, parallel over replicates, rows in
// deterministic (A, replicate, method) order.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

// Preamble + header + rows + aggregate comment lines.
std::string results_csv(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows);

}  // namespace shrinkage
