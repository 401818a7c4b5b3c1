#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kcmab/bandit.hpp"
#include "kcmab/metrics.hpp"
#include "kcmab/policies.hpp"

namespace kcmab {

// How arm distributions are built from a mean vector.
//   bernoulli: Bernoulli(mu)
//   two_point: {mu - d, mu + d} with d = min(mu, 1 - mu), probability 1/2
//              each (same mean, exercises the finite-support law)
enum class RewardLaw { bernoulli, two_point };

const char* to_string(RewardLaw law);
RewardLaw parse_reward_law(const std::string& name);

struct ExperimentConfig {
  std::vector<double> means;
  RewardLaw law = RewardLaw::bernoulli;
  std::int64_t horizon = 10000;
  int replications = 1000;
  std::uint64_t base_seed = 12345;
  std::vector<PolicySpec> policies;
  std::int64_t thin = 10;

  // Execution knobs; they never change the emitted numbers.
  bool parallel = true;
  int max_threads = 0;  // 0 = library default
};

// Throws std::invalid_argument naming the offending field.
void validate(const ExperimentConfig& config);

BanditInstance make_instance(const ExperimentConfig& config);

struct ResultRow {
  std::string policy;
  std::string metric;
  std::int64_t t = 0;
  double mean = 0.0;
  double std_error = 0.0;
  int n_reps = 0;
};

// Runs replications 0..R-1 of every policy (stream_id = replication
// index) and aggregates pseudo-regret, realized regret, total
// compensation and per-arm compensation at the thinned timesteps.
// Deterministic for a fixed config regardless of parallel/max_threads.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

// CSV with '#'-prefixed metadata comments and the header
// policy,metric,t,mean,stderr,n_reps. Floats carry 9 significant digits.
// Identical configs render byte-identical text.
std::string render_csv(const ExperimentConfig& config,
                       const std::vector<ResultRow>& rows);

// Renders fully before touching the filesystem, so a failed run never
// leaves partial output.
void write_csv_file(const ExperimentConfig& config,
                    const std::vector<ResultRow>& rows,
                    const std::string& path);

// Canned configurations reproducing the headline comparisons:
//   figure1: ucb, eps-greedy(20), mod-ts
//   figure2: classic-ts, mod-ts
//   figure3: eps-greedy(10), eps-greedy(15), eps-greedy(20)
// all on the nine-arm instance with means 0.9, 0.8, ..., 0.1,
// horizon 10000, 1000 replications.
ExperimentConfig preset(const std::string& name);

std::vector<std::pair<std::string, std::string>> preset_catalog();

// The nine-arm mean vector used by all presets.
std::vector<double> preset_means();

}  // namespace kcmab
