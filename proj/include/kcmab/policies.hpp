#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcmab/bandit.hpp"
#include "kcmab/player.hpp"
#include "kcmab/rng.hpp"

namespace kcmab {

enum class PolicyKind { ucb, eps_greedy, mod_ts, classic_ts, greedy };

// Labels for how each step was decided. Compensation accounting per
// phase: init, exploit, empirical and greedy steps pay 0; explore and
// sample steps pay max_j mu_hat_j - mu_hat_chosen.
enum class Phase { init, exploit, explore, empirical, sample, greedy };

const char* to_string(PolicyKind kind);
const char* to_string(Phase phase);

struct PolicySpec {
  PolicyKind kind = PolicyKind::ucb;
  double epsilon = 0.0;  // eps_greedy only; must be > 0 there

  // Stable label used in traces and CSV, e.g. "ucb", "eps-greedy-20".
  std::string id() const;
};

// Exploration-rate helper: epsilon = c * N / Delta_2^2, where Delta_2 is
// the instance's smallest nonzero gap.
double epsilon_from_constant(double c, const BanditInstance& instance);

struct EpsGreedyState {
  double epsilon = 0.0;
  int round_robin_arm = 0;  // next arm to explore, 0-based
};

struct TsState {
  enum class Mode { modified, classic };

  TsState(int num_arms, Mode mode);

  Mode mode = Mode::modified;
  std::vector<int> alpha;  // all entries start at 1
  std::vector<int> beta;
};

struct StepRecord {
  std::int64_t t = 0;
  int arm = 0;
  double reward = 0.0;
  double compensation = 0.0;
  Phase phase = Phase::init;
};

struct EpisodeTrace {
  std::string instance_id;
  std::string policy_id;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::vector<StepRecord> steps;  // timesteps 1..T, contiguous
};

// mean + sqrt(2 ln t / n). Natural log; t is the current 1-based global
// timestep (>= 2 whenever this is used).
double ucb_index(double mean, std::int64_t n, double t);

// Lowest index maximizing the ucb_index at time t. Requires every arm
// observed at least once.
int ucb_select(const History& h, std::int64_t t);

// min{1, epsilon / t}.
double eps_explore_prob(double epsilon, std::int64_t t);

struct EpsGreedyDecision {
  int arm = 0;
  Phase phase = Phase::exploit;
};

// One epsilon-greedy decision. With probability min{1, eps/t} returns the
// round-robin arm (phase explore) and advances the pointer; otherwise
// returns the empirical-best arm (phase exploit). Consumes exactly one
// uniform double. The caller pulls the arm and records compensation.
EpsGreedyDecision eps_greedy_step(EpsGreedyState& state, const History& h,
                                  std::int64_t t, RngStream& rng);

// Conjugate posterior update with Bernoulli rounding: Y = 1 with
// probability reward, then alpha += Y and beta += 1 - Y. No randomness is
// consumed when reward is exactly 0 or 1.
void ts_update(int& alpha, int& beta, double reward, RngStream& rng);

// One Beta(alpha_i, beta_i) sample per arm from the current state.
std::vector<double> sample_thetas(const TsState& state, RngStream& rng);

struct ModTsRound {
  int empirical_arm = 0;
  double empirical_reward = 0.0;
  int sample_arm = 0;
  double sample_reward = 0.0;
  double sample_compensation = 0.0;
};

// One two-step round at times (t, t+1). thetas must come from the state
// as it stood before the round (see sample_thetas). Step t pulls the
// empirical-best arm and pays nothing; step t+1 pulls the arm with the
// largest theta and pays max_j mu_hat_j(t+1) - mu_hat_chosen(t+1), where
// the means already include the first step's observation. Both steps
// update the posterior and the history.
ModTsRound mod_ts_round(TsState& state, History& h,
                        const BanditInstance& instance, std::int64_t t,
                        RngStream& rng, std::span<const double> thetas);

struct ClassicTsStep {
  int arm = 0;
  double reward = 0.0;
  double compensation = 0.0;
};

// One classic Thompson-sampling step: pull the arm with the largest
// theta, pay max_j mu_hat_j - mu_hat_chosen, update posterior and
// history.
ClassicTsStep classic_ts_step(TsState& state, History& h,
                              const BanditInstance& instance, RngStream& rng,
                              std::span<const double> thetas);

// Final policy-internal state, exposed for tests.
struct EpisodeDebug {
  std::vector<int> ts_alpha;
  std::vector<int> ts_beta;
  int eps_round_robin_arm = -1;
};

// Runs one full episode of `horizon` steps. Steps 1..N pull arms 1..N in
// order (phase init, compensation recorded as 0); later steps follow the
// policy. The result is a pure function of (policy, instance, horizon,
// seed, stream_id).
EpisodeTrace run_episode(const PolicySpec& policy,
                         const BanditInstance& instance, std::int64_t horizon,
                         std::uint64_t seed, std::uint64_t stream_id,
                         EpisodeDebug* debug = nullptr);

}  // namespace kcmab
