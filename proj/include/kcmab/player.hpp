#pragma once

#include <span>
#include <vector>

#include "kcmab/bandit.hpp"

namespace kcmab {

// Per-arm payments offered on top of the empirical means. Entries are
// nonnegative; length must match the arm count.
struct Offer {
  std::vector<double> compensations;

  static Offer zero(int num_arms) {
    return Offer{std::vector<double>(static_cast<std::size_t>(num_arms), 0.0)};
  }
};

// Lowest index maximizing v; the shared tie-break rule for every argmax
// in this library.
int argmax_lowest_index(std::span<const double> v);

// Smallest payment that makes `target` at least as attractive as every
// other arm: max_j means[j] - means[target]. Zero exactly when target
// already attains the max. NaN entries mark unobserved arms and raise
// UnobservedArmError.
double min_compensation(std::span<const double> means, int target);

// The myopic player's choice: lowest index maximizing means[j] +
// offer.compensations[j].
int greedy_choice(std::span<const double> means, const Offer& offer);

}  // namespace kcmab
