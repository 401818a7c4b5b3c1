#include "kcmab/bandit.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace kcmab {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) +
                                " must lie in [0,1], got " +
                                std::to_string(p));
  }
}

std::string format_means(const std::vector<double>& means) {
  std::string out = "[";
  char buf[32];
  for (std::size_t i = 0; i < means.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g", means[i]);
    if (i > 0) out += ",";
    out += buf;
  }
  out += "]";
  return out;
}

}  // namespace

ArmDistribution ArmDistribution::bernoulli(double p) {
  require_probability(p, "bernoulli p");
  ArmDistribution d;
  d.kind_ = Kind::bernoulli;
  d.p_ = p;
  d.mean_ = p;
  return d;
}

ArmDistribution ArmDistribution::discrete_bounded(
    std::vector<double> values, std::vector<double> probabilities) {
  if (values.empty() || values.size() != probabilities.size()) {
    throw std::invalid_argument(
        "discrete_bounded needs matching, nonempty value/probability lists");
  }
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw std::invalid_argument("discrete_bounded support must lie in [0,1]");
    }
    require_probability(probabilities[i], "discrete_bounded probability");
    total += probabilities[i];
    mean += values[i] * probabilities[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("discrete_bounded probabilities must sum to 1");
  }
  ArmDistribution d;
  d.kind_ = Kind::discrete_bounded;
  d.mean_ = mean;
  d.values_ = std::move(values);
  d.probs_ = std::move(probabilities);
  d.cdf_.resize(d.probs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.probs_.size(); ++i) {
    acc += d.probs_[i];
    d.cdf_[i] = acc;
  }
  d.cdf_.back() = 1.0;  // absorb rounding so every u in [0,1) lands
  return d;
}

double ArmDistribution::variance() const {
  if (kind_ == Kind::bernoulli) return p_ * (1.0 - p_);
  double m2 = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    m2 += values_[i] * values_[i] * probs_[i];
  }
  return m2 - mean_ * mean_;
}

double ArmDistribution::bernoulli_p() const {
  if (kind_ != Kind::bernoulli) {
    throw std::logic_error("bernoulli_p on a non-Bernoulli distribution");
  }
  return p_;
}

double draw_reward(const ArmDistribution& dist, RngStream& rng) {
  const double u = rng.next_double();
  if (dist.kind_ == ArmDistribution::Kind::bernoulli) {
    return u < dist.p_ ? 1.0 : 0.0;
  }
  for (std::size_t i = 0; i + 1 < dist.cdf_.size(); ++i) {
    if (u < dist.cdf_[i]) return dist.values_[i];
  }
  return dist.values_.back();
}

BanditInstance::BanditInstance(std::vector<ArmDistribution> arms)
    : arms_(std::move(arms)) {
  if (arms_.size() < 2) {
    throw std::invalid_argument("an instance needs at least two arms");
  }
  means_.reserve(arms_.size());
  for (const auto& a : arms_) means_.push_back(a.mean());

  best_arm_ = 0;
  for (std::size_t i = 1; i < means_.size(); ++i) {
    if (means_[i] > means_[best_arm_]) best_arm_ = static_cast<int>(i);
  }
  best_mean_ = means_[best_arm_];

  gaps_.reserve(means_.size());
  for (double m : means_) gaps_.push_back(best_mean_ - m);
  gaps_[best_arm_] = 0.0;

  bool all_bernoulli = true;
  for (const auto& a : arms_) {
    if (a.kind() != ArmDistribution::Kind::bernoulli) all_bernoulli = false;
  }
  id_ = (all_bernoulli ? "bernoulli" : "discrete") + format_means(means_);
}

BanditInstance BanditInstance::bernoulli(const std::vector<double>& means) {
  std::vector<ArmDistribution> arms;
  arms.reserve(means.size());
  for (double m : means) arms.push_back(ArmDistribution::bernoulli(m));
  return BanditInstance(std::move(arms));
}

const ArmDistribution& BanditInstance::arm(int i) const {
  if (i < 0 || i >= num_arms()) {
    throw std::out_of_range("arm index " + std::to_string(i));
  }
  return arms_[static_cast<std::size_t>(i)];
}

double BanditInstance::min_positive_gap() const {
  double best = -1.0;
  for (double g : gaps_) {
    if (g > 0.0 && (best < 0.0 || g < best)) best = g;
  }
  if (best < 0.0) {
    throw std::invalid_argument("every arm attains the best mean");
  }
  return best;
}

History::History(int num_arms) {
  if (num_arms < 1) throw std::invalid_argument("history needs >= 1 arm");
  pulls_.assign(static_cast<std::size_t>(num_arms), 0);
  sums_.assign(static_cast<std::size_t>(num_arms), 0.0);
}

void History::update(int arm, double reward) {
  if (arm < 0 || arm >= num_arms()) {
    throw std::out_of_range("history update: arm index " + std::to_string(arm));
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::invalid_argument("reward must lie in [0,1]");
  }
  pulls_[static_cast<std::size_t>(arm)] += 1;
  sums_[static_cast<std::size_t>(arm)] += reward;
  t_ += 1;
}

std::int64_t History::pulls(int arm) const {
  if (arm < 0 || arm >= num_arms()) {
    throw std::out_of_range("history pulls: arm index " + std::to_string(arm));
  }
  return pulls_[static_cast<std::size_t>(arm)];
}

double History::reward_sum(int arm) const {
  if (arm < 0 || arm >= num_arms()) {
    throw std::out_of_range("history sum: arm index " + std::to_string(arm));
  }
  return sums_[static_cast<std::size_t>(arm)];
}

double History::empirical_mean(int arm) const {
  if (arm < 0 || arm >= num_arms()) {
    throw std::out_of_range("empirical mean: arm index " + std::to_string(arm));
  }
  const auto i = static_cast<std::size_t>(arm);
  if (pulls_[i] == 0) throw UnobservedArmError(arm);
  return sums_[i] / static_cast<double>(pulls_[i]);
}

std::vector<double> History::empirical_means() const {
  std::vector<double> means(pulls_.size());
  for (int i = 0; i < num_arms(); ++i) means[static_cast<std::size_t>(i)] = empirical_mean(i);
  return means;
}

bool History::all_observed() const {
  for (auto n : pulls_) {
    if (n == 0) return false;
  }
  return true;
}

void History::check_consistent() const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < pulls_.size(); ++i) {
    assert(pulls_[i] >= 0);
    assert(sums_[i] >= -1e-9);
    assert(sums_[i] <= static_cast<double>(pulls_[i]) + 1e-9);
    total += pulls_[i];
  }
  assert(total == t_ - 1);
  (void)total;
}

}  // namespace kcmab
