#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kcmab/bandit.hpp"
#include "kcmab/rng.hpp"

namespace kcmab {

// KL divergence between Bernoulli(p) and Bernoulli(q) in nats, with the
// 0 log 0 = 0 convention. q in {0,1} is only allowed when p == q;
// otherwise the divergence is infinite and we throw.
double bernoulli_kl(double p, double q);

enum class Execution { serial, parallel };

// Value table of the optimal stopping problem over Bernoulli(mu) reward
// prefixes: f(a, b) is the least expected stopped fraction of ones
// reachable from a prefix with a ones and b zeros,
//
//   f(a, T-a) = a / T,
//   f(a, b)   = min{ a/(a+b), mu * f(a+1, b) + (1-mu) * f(a, b+1) },
//
// and value() = f(0,0) = mu * f(1,0) + (1-mu) * f(0,1).
class DpTable {
 public:
  double mu() const { return mu_; }
  std::int64_t horizon() const { return horizon_; }
  double value() const { return rows_[0][0]; }

  // f(ones, zeros); requires ones + zeros <= horizon.
  double at(std::int64_t ones, std::int64_t zeros) const;

  friend DpTable build_dp_table(double mu, std::int64_t horizon,
                                Execution exec);

 private:
  DpTable() = default;

  double mu_ = 0.0;
  std::int64_t horizon_ = 0;
  std::vector<std::vector<double>> rows_;  // rows_[t][a], t = 0..horizon
};

// Fills the whole triangular table backward from the boundary. O(T^2)
// time and memory. The parallel path splits each anti-diagonal row across
// threads; results are bit-identical to the serial path.
DpTable build_dp_table(double mu, std::int64_t horizon,
                       Execution exec = Execution::parallel);

// Convenience: value only.
double dp_value(double mu, std::int64_t horizon,
                Execution exec = Execution::parallel);

// Stopping policy indexed by reward prefix string. q(len, bits) is the
// probability of stopping at the prefix of length `len` whose outcomes
// are the low `len` bits of `bits` (most recent outcome in bit 0).
// q == 1 on every full-length prefix. Exhaustive storage, 2^(T+1)
// entries; horizons above 16 need allow_large.
class StringQPolicy {
 public:
  explicit StringQPolicy(std::int64_t horizon, bool allow_large = false);

  static StringQPolicy uniform_random(std::int64_t horizon, RngStream& rng,
                                      bool allow_large = false);

  std::int64_t horizon() const { return horizon_; }
  double q(std::int64_t len, std::uint32_t bits) const;

  // len must be < horizon; full-length stops are pinned to 1.
  void set_q(std::int64_t len, std::uint32_t bits, double value);

 private:
  std::int64_t horizon_;
  std::vector<std::vector<double>> q_;  // q_[len-1], 2^len entries
};

// Stopping policy that depends on the prefix only through (ones, length).
// Usable at horizons where string enumeration is out of reach.
class CompactQPolicy {
 public:
  explicit CompactQPolicy(std::int64_t horizon);

  std::int64_t horizon() const { return horizon_; }
  double q(std::int64_t ones, std::int64_t len) const;
  void set_q(std::int64_t ones, std::int64_t len, double value);

 private:
  std::int64_t horizon_;
  std::vector<std::vector<double>> q_;  // q_[len-1], len+1 entries
};

// Expected stopped fraction of ones under policy q with outcome law
// Bernoulli(mu). Always >= dp_value(mu, q.horizon()).
double emp_value(const StringQPolicy& q, double mu);
double emp_value(const CompactQPolicy& q, double mu);

// The stop/continue rule the table's minima chose: stop exactly where
// stopping is strictly better than continuing. Achieves the table value.
CompactQPolicy greedy_policy_from_table(const DpTable& table);

// Reference curve sum_i gap_i * ln T / KL(mu_i, mu_best) over suboptimal
// arms, evaluated on a grid of horizons. Order-level reference only; the
// constants are not tight.
struct LbCurve {
  std::vector<double> horizons;
  std::vector<int> arm_indices;          // suboptimal arms, 0-based
  std::vector<double> log_coefficients;  // gap_i / KL(mu_i, mu_best)
  double total_log_coefficient = 0.0;
  std::vector<std::vector<double>> per_arm_terms;  // [grid][arm]
  std::vector<double> totals;                      // [grid]
};

// Requires every arm Bernoulli and a unique best mean.
LbCurve compensation_lb_curve(const BanditInstance& instance,
                              std::span<const double> horizons);

}  // namespace kcmab
