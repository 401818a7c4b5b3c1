#include "kcmab/player.hpp"

#include <cmath>
#include <stdexcept>

namespace kcmab {

namespace {

void require_observed(std::span<const double> means) {
  if (means.empty()) throw std::invalid_argument("empty means array");
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (std::isnan(means[i])) throw UnobservedArmError(static_cast<int>(i));
  }
}

}  // namespace

int argmax_lowest_index(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("argmax of empty array");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<int>(best);
}

double min_compensation(std::span<const double> means, int target) {
  require_observed(means);
  if (target < 0 || static_cast<std::size_t>(target) >= means.size()) {
    throw std::out_of_range("min_compensation: target " + std::to_string(target));
  }
  double best = means[0];
  for (double m : means) {
    if (m > best) best = m;
  }
  return best - means[static_cast<std::size_t>(target)];
}

int greedy_choice(std::span<const double> means, const Offer& offer) {
  require_observed(means);
  if (offer.compensations.size() != means.size()) {
    throw std::invalid_argument("offer length does not match arm count");
  }
  std::vector<double> income(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!(offer.compensations[i] >= 0.0)) {
      throw std::invalid_argument("offer compensations must be >= 0");
    }
    income[i] = means[i] + offer.compensations[i];
  }
  return argmax_lowest_index(income);
}

}  // namespace kcmab
