#include "kcmab/policies.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kcmab {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ucb: return "ucb";
    case PolicyKind::eps_greedy: return "eps-greedy";
    case PolicyKind::mod_ts: return "mod-ts";
    case PolicyKind::classic_ts: return "classic-ts";
    case PolicyKind::greedy: return "greedy";
  }
  return "?";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::init: return "init";
    case Phase::exploit: return "exploit";
    case Phase::explore: return "explore";
    case Phase::empirical: return "empirical";
    case Phase::sample: return "sample";
    case Phase::greedy: return "greedy";
  }
  return "?";
}

std::string PolicySpec::id() const {
  if (kind == PolicyKind::eps_greedy) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "eps-greedy-%g", epsilon);
    return buf;
  }
  return to_string(kind);
}

double epsilon_from_constant(double c, const BanditInstance& instance) {
  if (!(c > 0.0)) throw std::invalid_argument("epsilon constant must be > 0");
  const double d2 = instance.min_positive_gap();
  return c * static_cast<double>(instance.num_arms()) / (d2 * d2);
}

TsState::TsState(int num_arms, Mode mode_in) : mode(mode_in) {
  if (num_arms < 1) throw std::invalid_argument("TsState needs >= 1 arm");
  alpha.assign(static_cast<std::size_t>(num_arms), 1);
  beta.assign(static_cast<std::size_t>(num_arms), 1);
}

double ucb_index(double mean, std::int64_t n, double t) {
  if (n < 1) throw std::invalid_argument("ucb_index needs n >= 1");
  return mean + std::sqrt(2.0 * std::log(t) / static_cast<double>(n));
}

int ucb_select(const History& h, std::int64_t t) {
  const std::vector<double> means = h.empirical_means();
  std::vector<double> index(means.size());
  for (int i = 0; i < h.num_arms(); ++i) {
    index[static_cast<std::size_t>(i)] =
        ucb_index(means[static_cast<std::size_t>(i)], h.pulls(i),
                  static_cast<double>(t));
  }
  return argmax_lowest_index(index);
}

double eps_explore_prob(double epsilon, std::int64_t t) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  const double p = epsilon / static_cast<double>(t);
  return p < 1.0 ? p : 1.0;
}

EpsGreedyDecision eps_greedy_step(EpsGreedyState& state, const History& h,
                                  std::int64_t t, RngStream& rng) {
  const double p = eps_explore_prob(state.epsilon, t);
  const double u = rng.next_double();
  if (u < p) {
    const int arm = state.round_robin_arm;
    if (arm < 0 || arm >= h.num_arms()) {
      throw std::out_of_range("round-robin pointer out of range");
    }
    state.round_robin_arm = (arm + 1) % h.num_arms();
    return {arm, Phase::explore};
  }
  const std::vector<double> means = h.empirical_means();
  return {argmax_lowest_index(means), Phase::exploit};
}

void ts_update(int& alpha, int& beta, double reward, RngStream& rng) {
  if (alpha < 1 || beta < 1) {
    throw std::invalid_argument("ts_update needs alpha, beta >= 1");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::invalid_argument("reward must lie in [0,1]");
  }
  int y;
  if (reward == 0.0) {
    y = 0;
  } else if (reward == 1.0) {
    y = 1;
  } else {
    y = rng.next_double() < reward ? 1 : 0;
  }
  alpha += y;
  beta += 1 - y;
}

std::vector<double> sample_thetas(const TsState& state, RngStream& rng) {
  std::vector<double> thetas(state.alpha.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    thetas[i] = rng.next_beta(static_cast<double>(state.alpha[i]),
                              static_cast<double>(state.beta[i]));
  }
  return thetas;
}

ModTsRound mod_ts_round(TsState& state, History& h,
                        const BanditInstance& instance, std::int64_t t,
                        RngStream& rng, std::span<const double> thetas) {
  if (thetas.size() != static_cast<std::size_t>(h.num_arms())) {
    throw std::invalid_argument("theta count does not match arm count");
  }
  ModTsRound round;
  assert(h.t() == t);
  (void)t;

  // Empirical step: no payment by definition of the greedy player.
  const std::vector<double> means_t = h.empirical_means();
  round.empirical_arm = argmax_lowest_index(means_t);
  round.empirical_reward = draw_reward(instance.arm(round.empirical_arm), rng);
  ts_update(state.alpha[static_cast<std::size_t>(round.empirical_arm)],
            state.beta[static_cast<std::size_t>(round.empirical_arm)],
            round.empirical_reward, rng);
  h.update(round.empirical_arm, round.empirical_reward);

  // Sample step: payment uses the means as of t+1, i.e. after the
  // empirical pull has landed.
  round.sample_arm = argmax_lowest_index(thetas);
  const std::vector<double> means_t1 = h.empirical_means();
  round.sample_compensation = min_compensation(means_t1, round.sample_arm);
  round.sample_reward = draw_reward(instance.arm(round.sample_arm), rng);
  ts_update(state.alpha[static_cast<std::size_t>(round.sample_arm)],
            state.beta[static_cast<std::size_t>(round.sample_arm)],
            round.sample_reward, rng);
  h.update(round.sample_arm, round.sample_reward);

  return round;
}

ClassicTsStep classic_ts_step(TsState& state, History& h,
                              const BanditInstance& instance, RngStream& rng,
                              std::span<const double> thetas) {
  if (thetas.size() != static_cast<std::size_t>(h.num_arms())) {
    throw std::invalid_argument("theta count does not match arm count");
  }
  ClassicTsStep step;
  step.arm = argmax_lowest_index(thetas);
  const std::vector<double> means = h.empirical_means();
  step.compensation = min_compensation(means, step.arm);
  step.reward = draw_reward(instance.arm(step.arm), rng);
  ts_update(state.alpha[static_cast<std::size_t>(step.arm)],
            state.beta[static_cast<std::size_t>(step.arm)], step.reward, rng);
  h.update(step.arm, step.reward);
  return step;
}

EpisodeTrace run_episode(const PolicySpec& policy,
                         const BanditInstance& instance, std::int64_t horizon,
                         std::uint64_t seed, std::uint64_t stream_id,
                         EpisodeDebug* debug) {
  const int n = instance.num_arms();
  if (horizon < n) {
    throw std::invalid_argument("horizon must be >= number of arms");
  }
  if (policy.kind == PolicyKind::eps_greedy && !(policy.epsilon > 0.0)) {
    throw std::invalid_argument("eps-greedy needs epsilon > 0");
  }

  RngStream rng(seed, stream_id);
  History h(n);
  const bool uses_ts =
      policy.kind == PolicyKind::mod_ts || policy.kind == PolicyKind::classic_ts;
  TsState ts(n, policy.kind == PolicyKind::classic_ts ? TsState::Mode::classic
                                                      : TsState::Mode::modified);
  EpsGreedyState eps{policy.epsilon, 0};

  EpisodeTrace trace;
  trace.instance_id = instance.id();
  trace.policy_id = policy.id();
  trace.seed = seed;
  trace.stream_id = stream_id;
  trace.steps.reserve(static_cast<std::size_t>(horizon));

  // Initialization round: one pull per arm, payment recorded as 0.
  for (int arm = 0; arm < n; ++arm) {
    const double x = draw_reward(instance.arm(arm), rng);
    if (uses_ts) {
      ts_update(ts.alpha[static_cast<std::size_t>(arm)],
                ts.beta[static_cast<std::size_t>(arm)], x, rng);
    }
    h.update(arm, x);
    trace.steps.push_back({h.t() - 1, arm, x, 0.0, Phase::init});
  }

  std::int64_t t = n + 1;
  while (t <= horizon) {
#ifndef NDEBUG
    h.check_consistent();
    assert(h.t() == t);
#endif
    switch (policy.kind) {
      case PolicyKind::ucb: {
        const int arm = ucb_select(h, t);
        const double comp = min_compensation(h.empirical_means(), arm);
        const double x = draw_reward(instance.arm(arm), rng);
        h.update(arm, x);
        trace.steps.push_back({t, arm, x, comp, Phase::explore});
        t += 1;
        break;
      }
      case PolicyKind::greedy: {
        const std::vector<double> means = h.empirical_means();
        const int arm = greedy_choice(means, Offer::zero(n));
        const double x = draw_reward(instance.arm(arm), rng);
        h.update(arm, x);
        trace.steps.push_back({t, arm, x, 0.0, Phase::greedy});
        t += 1;
        break;
      }
      case PolicyKind::eps_greedy: {
        const EpsGreedyDecision d = eps_greedy_step(eps, h, t, rng);
        const double comp = d.phase == Phase::explore
                                ? min_compensation(h.empirical_means(), d.arm)
                                : 0.0;
        const double x = draw_reward(instance.arm(d.arm), rng);
        h.update(d.arm, x);
        trace.steps.push_back({t, d.arm, x, comp, d.phase});
        t += 1;
        break;
      }
      case PolicyKind::classic_ts: {
        const std::vector<double> thetas = sample_thetas(ts, rng);
        const ClassicTsStep s = classic_ts_step(ts, h, instance, rng, thetas);
        trace.steps.push_back({t, s.arm, s.reward, s.compensation, Phase::sample});
        t += 1;
        break;
      }
      case PolicyKind::mod_ts: {
        if (t + 1 <= horizon) {
          const std::vector<double> thetas = sample_thetas(ts, rng);
          const ModTsRound r = mod_ts_round(ts, h, instance, t, rng, thetas);
          trace.steps.push_back(
              {t, r.empirical_arm, r.empirical_reward, 0.0, Phase::empirical});
          trace.steps.push_back({t + 1, r.sample_arm, r.sample_reward,
                                 r.sample_compensation, Phase::sample});
          t += 2;
        } else {
          // Leftover single slot at an odd tail: empirical step only.
          const std::vector<double> means = h.empirical_means();
          const int arm = argmax_lowest_index(means);
          const double x = draw_reward(instance.arm(arm), rng);
          ts_update(ts.alpha[static_cast<std::size_t>(arm)],
                    ts.beta[static_cast<std::size_t>(arm)], x, rng);
          h.update(arm, x);
          trace.steps.push_back({t, arm, x, 0.0, Phase::empirical});
          t += 1;
        }
        break;
      }
    }
  }

  if (debug != nullptr) {
    if (uses_ts) {
      debug->ts_alpha = ts.alpha;
      debug->ts_beta = ts.beta;
    }
    if (policy.kind == PolicyKind::eps_greedy) {
      debug->eps_round_robin_arm = eps.round_robin_arm;
    }
  }
  return trace;
}

}  // namespace kcmab
