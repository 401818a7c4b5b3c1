#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcmab/rng.hpp"

namespace kcmab {

// Thrown when an operation needs the empirical mean of an arm that has
// never been pulled. Callers must not substitute a silent default.
class UnobservedArmError : public std::runtime_error {
 public:
  explicit UnobservedArmError(int arm)
      : std::runtime_error("arm " + std::to_string(arm + 1) +
                           " has no observations"),
        arm_(arm) {}
  int arm() const { return arm_; }

 private:
  int arm_;
};

// A reward law with support contained in [0, 1]. Either Bernoulli(p) or a
// finite distribution over points of [0, 1].
class ArmDistribution {
 public:
  enum class Kind { bernoulli, discrete_bounded };

  static ArmDistribution bernoulli(double p);

  // values[i] in [0, 1]; probabilities sum to 1 within 1e-12.
  static ArmDistribution discrete_bounded(std::vector<double> values,
                                          std::vector<double> probabilities);

  Kind kind() const { return kind_; }
  double mean() const { return mean_; }
  double variance() const;

  // Bernoulli success probability; only valid for Kind::bernoulli.
  double bernoulli_p() const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probabilities() const { return probs_; }

  friend double draw_reward(const ArmDistribution& dist, RngStream& rng);

 private:
  ArmDistribution() = default;

  Kind kind_ = Kind::bernoulli;
  double mean_ = 0.0;
  double p_ = 0.0;                    // bernoulli only
  std::vector<double> values_;        // discrete only
  std::vector<double> probs_;
  std::vector<double> cdf_;           // last entry pinned to 1.0
};

// One independent draw from dist. Consumes exactly two raw words
// regardless of the outcome, so replay stays aligned.
double draw_reward(const ArmDistribution& dist, RngStream& rng);

// An ordered arm set with derived means, best mean and per-arm gaps.
// Arms are not required to be sorted by mean; the best arm is the
// lowest-index argmax of the true means.
class BanditInstance {
 public:
  explicit BanditInstance(std::vector<ArmDistribution> arms);

  static BanditInstance bernoulli(const std::vector<double>& means);

  int num_arms() const { return static_cast<int>(arms_.size()); }
  const ArmDistribution& arm(int i) const;
  const std::vector<double>& means() const { return means_; }
  double best_mean() const { return best_mean_; }
  int best_arm() const { return best_arm_; }

  // gaps()[i] = best_mean - means[i]; zero exactly for every best arm.
  const std::vector<double>& gaps() const { return gaps_; }

  // Smallest nonzero gap; throws if every arm attains the best mean.
  double min_positive_gap() const;

  // Stable label, e.g. "bernoulli[0.9,0.8,0.1]"; used in trace and CSV
  // metadata.
  std::string id() const { return id_; }

 private:
  std::vector<ArmDistribution> arms_;
  std::vector<double> means_;
  std::vector<double> gaps_;
  double best_mean_ = 0.0;
  int best_arm_ = 0;
  std::string id_;
};

// Per-arm pull counts N_i and reward sums M_i. t is the 1-based index of
// the next step to be played, so sum_i N_i == t - 1 always holds.
class History {
 public:
  explicit History(int num_arms);

  // Records one pull: N_arm += 1, M_arm += reward, t += 1.
  void update(int arm, double reward);

  std::int64_t pulls(int arm) const;
  double reward_sum(int arm) const;

  // M_arm / N_arm; throws UnobservedArmError when N_arm == 0.
  double empirical_mean(int arm) const;

  // All empirical means; throws on the first unobserved arm.
  std::vector<double> empirical_means() const;

  bool all_observed() const;
  int num_arms() const { return static_cast<int>(pulls_.size()); }
  std::int64_t t() const { return t_; }

  // Exhaustive invariant check (counts vs t, 0 <= M_i <= N_i); meant for
  // debug builds and tests.
  void check_consistent() const;

 private:
  std::vector<std::int64_t> pulls_;
  std::vector<double> sums_;
  std::int64_t t_ = 1;
};

}  // namespace kcmab
