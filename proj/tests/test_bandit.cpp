#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "kcmab/bandit.hpp"

using namespace kcmab;

TEST_CASE("arm distribution validation") {
  CHECK_THROWS_AS(ArmDistribution::bernoulli(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(ArmDistribution::bernoulli(1.5), std::invalid_argument);
  CHECK_THROWS_AS(ArmDistribution::discrete_bounded({0.5, 1.2}, {0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ArmDistribution::discrete_bounded({0.5, 0.6}, {0.5, 0.6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ArmDistribution::discrete_bounded({}, {}),
                  std::invalid_argument);
  // Sum within 1e-12 is accepted.
  CHECK_NOTHROW(
      ArmDistribution::discrete_bounded({0.0, 1.0}, {0.25, 0.75 + 1e-13}));
}

TEST_CASE("closed-form means") {
  CHECK(ArmDistribution::bernoulli(0.35).mean() == 0.35);
  const auto d = ArmDistribution::discrete_bounded({0.0, 0.5, 1.0},
                                                   {0.2, 0.3, 0.5});
  CHECK(d.mean() == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(d.mean() >= 0.0);
  CHECK(d.mean() <= 1.0);
}

TEST_CASE("degenerate Bernoulli draws") {
  RngStream rng(1, 0);
  const auto one = ArmDistribution::bernoulli(1.0);
  const auto zero = ArmDistribution::bernoulli(0.0);
  for (int i = 0; i < 100; ++i) {
    CHECK(draw_reward(one, rng) == 1.0);
    CHECK(draw_reward(zero, rng) == 0.0);
  }
}

TEST_CASE("draw_reward consumes exactly two words per call") {
  RngStream rng(3, 9);
  const auto bern = ArmDistribution::bernoulli(0.4);
  const auto disc = ArmDistribution::discrete_bounded({0.1, 0.9}, {0.5, 0.5});
  draw_reward(bern, rng);
  CHECK(rng.words_consumed() == 2);
  draw_reward(disc, rng);
  CHECK(rng.words_consumed() == 4);
}

TEST_CASE("sample means converge to closed-form means") {
  // 10 sigma binomial band: sigma = sqrt(p(1-p)/n).
  const int n = 1000000;
  RngStream rng(77, 0);
  const auto bern = ArmDistribution::bernoulli(0.9);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += draw_reward(bern, rng);
  CHECK(std::abs(sum / n - 0.9) < 0.003);

  const auto disc =
      ArmDistribution::discrete_bounded({0.0, 0.4, 1.0}, {0.3, 0.4, 0.3});
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) sum2 += draw_reward(disc, rng);
  const double band = 10.0 * std::sqrt(disc.variance() / n);
  CHECK(std::abs(sum2 / n - disc.mean()) < band);
}

TEST_CASE("instance derives gaps and best arm without sortedness") {
  const auto inst = BanditInstance::bernoulli({0.3, 0.9, 0.5, 0.9});
  CHECK(inst.best_mean() == 0.9);
  CHECK(inst.best_arm() == 1);  // lowest index among the tied best arms
  CHECK(inst.gaps()[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(inst.gaps()[1] == 0.0);
  CHECK(inst.gaps()[3] == 0.0);
  for (double g : inst.gaps()) CHECK(g >= 0.0);
  CHECK(inst.min_positive_gap() == doctest::Approx(0.4).epsilon(1e-15));

  CHECK_THROWS_AS(BanditInstance::bernoulli({0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BanditInstance::bernoulli({0.5, 0.5}).min_positive_gap(),
                  std::invalid_argument);
}

TEST_CASE("history updates one arm at a time") {
  History h(2);
  CHECK(h.t() == 1);
  h.update(1, 0.7);
  CHECK(h.pulls(0) == 0);
  CHECK(h.pulls(1) == 1);
  CHECK(h.reward_sum(1) == 0.7);
  CHECK(h.t() == 2);

  CHECK_THROWS_AS(h.update(2, 0.5), std::out_of_range);
  CHECK_THROWS_AS(h.update(-1, 0.5), std::out_of_range);
  CHECK_THROWS_AS(h.update(0, 1.5), std::invalid_argument);
}

TEST_CASE("empirical means") {
  History h(3);
  CHECK_THROWS_AS(h.empirical_mean(0), UnobservedArmError);
  CHECK_THROWS_AS(h.empirical_means(), UnobservedArmError);

  h.update(0, 0.7);
  CHECK(h.empirical_mean(0) == 0.7);

  for (int i = 0; i < 5; ++i) h.update(1, 0.0);
  CHECK(h.empirical_mean(1) == 0.0);

  h.update(2, 1.0);
  h.update(2, 0.0);
  h.update(2, 1.0);
  CHECK(h.empirical_mean(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // All-ones arm pins the mean at 1.
  History k(2);
  for (int i = 0; i < 7; ++i) k.update(0, 1.0);
  CHECK(k.empirical_mean(0) == 1.0);
}

TEST_CASE("history conservation under random play") {
  RngStream rng(5, 2);
  const auto inst = BanditInstance::bernoulli({0.2, 0.5, 0.8});
  History h(3);
  for (int step = 0; step < 500; ++step) {
    const int arm = static_cast<int>(rng.next_u32() % 3u);
    h.update(arm, draw_reward(inst.arm(arm), rng));
    std::int64_t total = 0;
    for (int a = 0; a < 3; ++a) {
      total += h.pulls(a);
      CHECK(h.reward_sum(a) >= 0.0);
      CHECK(h.reward_sum(a) <= static_cast<double>(h.pulls(a)));
    }
    CHECK(total == h.t() - 1);
    h.check_consistent();
  }
}

TEST_CASE("instance id is stable and carries the law") {
  const auto inst = BanditInstance::bernoulli({0.9, 0.1});
  CHECK(inst.id() == "bernoulli[0.9,0.1]");
  const auto disc = BanditInstance(std::vector<ArmDistribution>{
      ArmDistribution::discrete_bounded({0.25, 0.75}, {0.5, 0.5}),
      ArmDistribution::bernoulli(0.2)});
  CHECK(disc.id() == "discrete[0.5,0.2]");
}
