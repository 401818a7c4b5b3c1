#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcmab/bandit.hpp"
#include "kcmab/policies.hpp"

namespace kcmab {

struct CurvePoint {
  std::int64_t t = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample sigma / sqrt(n_reps); 0 when n_reps == 1
  int n_reps = 0;
};

enum class MetricKind {
  pseudo_regret,
  realized_regret,
  compensation_total,
  compensation_per_arm,
};

// CSV label; arm is required (0-based) for compensation_per_arm and the
// label carries it 1-based, e.g. "compensation_arm_3".
std::string metric_name(MetricKind kind, int arm = -1);

// Cumulative sum of the per-pull gaps Delta_{a(t)}. Nondecreasing,
// nonnegative; final value equals sum_i N_i * Delta_i.
std::vector<double> pseudo_regret_curve(const EpisodeTrace& trace,
                                        const BanditInstance& instance);

// t * best_mean - cumulative realized reward. May be negative pointwise;
// matches pseudo-regret in expectation.
std::vector<double> realized_regret_curve(const EpisodeTrace& trace,
                                          const BanditInstance& instance);

// Cumulative payment. Nondecreasing, nonnegative.
std::vector<double> compensation_curve(const EpisodeTrace& trace);

// Cumulative payment on one arm; the per-arm curves sum to the total.
std::vector<double> compensation_curve_for_arm(const EpisodeTrace& trace,
                                               int arm);

// All per-arm compensation curves in one pass.
std::vector<std::vector<double>> per_arm_compensation_curves(
    const EpisodeTrace& trace, int num_arms);

// Retained 1-based timesteps for a thinned curve: stride, 2*stride, ...,
// plus the final step when the horizon is not a multiple of the stride.
// ceil(horizon / stride) points in total.
std::vector<std::int64_t> thin_timesteps(std::int64_t horizon,
                                         std::int64_t stride);

std::vector<double> thin_curve(std::span<const double> curve,
                               std::int64_t stride);

// Cross-replication mean and standard error at every retained step.
// Input curves must all have the same length; the reduction runs in
// replication-index order so the result is independent of scheduling.
std::vector<CurvePoint> aggregate(const std::vector<std::vector<double>>& curves,
                                  std::int64_t stride);

}  // namespace kcmab
