#include "kcmab/lower_bound.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kcmab {

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  }
}

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  }
}

// Hard ceiling for exhaustive string storage (2^(T+1) doubles).
constexpr std::int64_t kStringHorizonSoftCap = 16;
constexpr std::int64_t kStringHorizonHardCap = 24;

}  // namespace

double bernoulli_kl(double p, double q) {
  require_probability(p, "bernoulli_kl p");
  require_probability(q, "bernoulli_kl q");
  if (q == 0.0 || q == 1.0) {
    if (p == q) return 0.0;
    throw std::domain_error("bernoulli_kl: infinite divergence, q in {0,1}");
  }
  const double t1 = p == 0.0 ? 0.0 : p * std::log(p / q);
  const double t2 =
      p == 1.0 ? 0.0 : (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return t1 + t2;
}

double DpTable::at(std::int64_t ones, std::int64_t zeros) const {
  if (ones < 0 || zeros < 0 || ones + zeros > horizon_) {
    throw std::out_of_range("DpTable::at(" + std::to_string(ones) + "," +
                            std::to_string(zeros) + ")");
  }
  return rows_[static_cast<std::size_t>(ones + zeros)]
              [static_cast<std::size_t>(ones)];
}

DpTable build_dp_table(double mu, std::int64_t horizon, Execution exec) {
  require_probability(mu, "dp mu");
  if (horizon < 1) throw std::invalid_argument("dp horizon must be >= 1");

  DpTable table;
  table.mu_ = mu;
  table.horizon_ = horizon;
  table.rows_.resize(static_cast<std::size_t>(horizon) + 1);
  for (std::int64_t t = 0; t <= horizon; ++t) {
    table.rows_[static_cast<std::size_t>(t)].resize(
        static_cast<std::size_t>(t) + 1);
  }

  // Boundary: forced stop at depth T.
  auto& last = table.rows_[static_cast<std::size_t>(horizon)];
  for (std::int64_t a = 0; a <= horizon; ++a) {
    last[static_cast<std::size_t>(a)] =
        static_cast<double>(a) / static_cast<double>(horizon);
  }

  // Wavefront sweep: cells of one row only read the row below, so each
  // row splits across threads; the implicit barrier after the row keeps
  // the sweep in lockstep. One team for the whole fill.
#pragma omp parallel if (exec == Execution::parallel)
  {
    for (std::int64_t t = horizon - 1; t >= 1; --t) {
      const auto& up = table.rows_[static_cast<std::size_t>(t) + 1];
      auto& row = table.rows_[static_cast<std::size_t>(t)];
      const double td = static_cast<double>(t);
#pragma omp for schedule(static)
      for (std::int64_t a = 0; a <= t; ++a) {
        const double stop = static_cast<double>(a) / td;
        const double cont = mu * up[static_cast<std::size_t>(a) + 1] +
                            (1.0 - mu) * up[static_cast<std::size_t>(a)];
        row[static_cast<std::size_t>(a)] = stop < cont ? stop : cont;
      }
    }
  }

  table.rows_[0][0] = mu * table.rows_[1][1] + (1.0 - mu) * table.rows_[1][0];
  return table;
}

double dp_value(double mu, std::int64_t horizon, Execution exec) {
  return build_dp_table(mu, horizon, exec).value();
}

StringQPolicy::StringQPolicy(std::int64_t horizon, bool allow_large)
    : horizon_(horizon) {
  if (horizon < 1) throw std::invalid_argument("q horizon must be >= 1");
  if (horizon > kStringHorizonSoftCap && !allow_large) {
    throw std::invalid_argument(
        "string-indexed policies above horizon 16 need allow_large");
  }
  if (horizon > kStringHorizonHardCap) {
    throw std::invalid_argument("string-indexed policy horizon above 24");
  }
  q_.resize(static_cast<std::size_t>(horizon));
  for (std::int64_t len = 1; len <= horizon; ++len) {
    q_[static_cast<std::size_t>(len - 1)].assign(
        std::size_t{1} << static_cast<std::size_t>(len),
        len == horizon ? 1.0 : 0.0);
  }
}

StringQPolicy StringQPolicy::uniform_random(std::int64_t horizon,
                                            RngStream& rng, bool allow_large) {
  StringQPolicy policy(horizon, allow_large);
  for (std::int64_t len = 1; len < horizon; ++len) {
    for (auto& v : policy.q_[static_cast<std::size_t>(len - 1)]) {
      v = rng.next_double();
    }
  }
  return policy;
}

double StringQPolicy::q(std::int64_t len, std::uint32_t bits) const {
  if (len < 1 || len > horizon_) {
    throw std::out_of_range("StringQPolicy::q length " + std::to_string(len));
  }
  const auto& level = q_[static_cast<std::size_t>(len - 1)];
  if (bits >= level.size()) {
    throw std::out_of_range("StringQPolicy::q bits out of range");
  }
  return level[bits];
}

void StringQPolicy::set_q(std::int64_t len, std::uint32_t bits, double value) {
  if (len < 1 || len >= horizon_) {
    throw std::out_of_range("StringQPolicy::set_q on length " +
                            std::to_string(len));
  }
  require_unit_interval(value, "stop probability");
  auto& level = q_[static_cast<std::size_t>(len - 1)];
  if (bits >= level.size()) {
    throw std::out_of_range("StringQPolicy::set_q bits out of range");
  }
  level[bits] = value;
}

CompactQPolicy::CompactQPolicy(std::int64_t horizon) : horizon_(horizon) {
  if (horizon < 1) throw std::invalid_argument("q horizon must be >= 1");
  q_.resize(static_cast<std::size_t>(horizon));
  for (std::int64_t len = 1; len <= horizon; ++len) {
    q_[static_cast<std::size_t>(len - 1)].assign(
        static_cast<std::size_t>(len) + 1, len == horizon ? 1.0 : 0.0);
  }
}

double CompactQPolicy::q(std::int64_t ones, std::int64_t len) const {
  if (len < 1 || len > horizon_ || ones < 0 || ones > len) {
    throw std::out_of_range("CompactQPolicy::q(" + std::to_string(ones) + "," +
                            std::to_string(len) + ")");
  }
  return q_[static_cast<std::size_t>(len - 1)][static_cast<std::size_t>(ones)];
}

void CompactQPolicy::set_q(std::int64_t ones, std::int64_t len, double value) {
  if (len < 1 || len >= horizon_ || ones < 0 || ones > len) {
    throw std::out_of_range("CompactQPolicy::set_q(" + std::to_string(ones) +
                            "," + std::to_string(len) + ")");
  }
  require_unit_interval(value, "stop probability");
  q_[static_cast<std::size_t>(len - 1)][static_cast<std::size_t>(ones)] = value;
}

double emp_value(const StringQPolicy& policy, double mu) {
  require_probability(mu, "emp mu");
  const std::int64_t horizon = policy.horizon();

  // Backward pass over prefix strings, one level at a time.
  std::vector<double> next;
  std::vector<double> level;
  for (std::int64_t len = horizon; len >= 1; --len) {
    const std::size_t count = std::size_t{1} << static_cast<std::size_t>(len);
    level.assign(count, 0.0);
    for (std::size_t bits = 0; bits < count; ++bits) {
      const double stop_value =
          static_cast<double>(std::popcount(bits)) / static_cast<double>(len);
      const double q = policy.q(len, static_cast<std::uint32_t>(bits));
      double value = q * stop_value;
      if (len < horizon) {
        const double cont = mu * next[(bits << 1) | 1u] +
                            (1.0 - mu) * next[bits << 1];
        value += (1.0 - q) * cont;
      }
      level[bits] = value;
    }
    next.swap(level);
  }
  return mu * next[1] + (1.0 - mu) * next[0];
}

double emp_value(const CompactQPolicy& policy, double mu) {
  require_probability(mu, "emp mu");
  const std::int64_t horizon = policy.horizon();

  std::vector<double> next;
  std::vector<double> level;
  for (std::int64_t len = horizon; len >= 1; --len) {
    level.assign(static_cast<std::size_t>(len) + 1, 0.0);
    for (std::int64_t a = 0; a <= len; ++a) {
      const double stop_value =
          static_cast<double>(a) / static_cast<double>(len);
      const double q = policy.q(a, len);
      double value = q * stop_value;
      if (len < horizon) {
        const double cont = mu * next[static_cast<std::size_t>(a) + 1] +
                            (1.0 - mu) * next[static_cast<std::size_t>(a)];
        value += (1.0 - q) * cont;
      }
      level[static_cast<std::size_t>(a)] = value;
    }
    next.swap(level);
  }
  return mu * next[1] + (1.0 - mu) * next[0];
}

CompactQPolicy greedy_policy_from_table(const DpTable& table) {
  const std::int64_t horizon = table.horizon();
  const double mu = table.mu();
  CompactQPolicy policy(horizon);
  for (std::int64_t len = 1; len < horizon; ++len) {
    for (std::int64_t a = 0; a <= len; ++a) {
      // Mirrors the table fill exactly: stop iff strictly better.
      const double stop = static_cast<double>(a) / static_cast<double>(len);
      const double cont = mu * table.at(a + 1, len - a) +
                          (1.0 - mu) * table.at(a, len - a + 1);
      policy.set_q(a, len, stop < cont ? 1.0 : 0.0);
    }
  }
  return policy;
}

LbCurve compensation_lb_curve(const BanditInstance& instance,
                              std::span<const double> horizons) {
  for (int i = 0; i < instance.num_arms(); ++i) {
    if (instance.arm(i).kind() != ArmDistribution::Kind::bernoulli) {
      throw std::invalid_argument(
          "compensation_lb_curve needs Bernoulli arms");
    }
  }
  LbCurve curve;
  curve.horizons.assign(horizons.begin(), horizons.end());
  const double best = instance.best_mean();
  for (int i = 0; i < instance.num_arms(); ++i) {
    if (i == instance.best_arm()) continue;
    const double mean = instance.means()[static_cast<std::size_t>(i)];
    if (mean == best) {
      throw std::invalid_argument(
          "compensation_lb_curve needs a unique best mean");
    }
    const double coeff =
        instance.gaps()[static_cast<std::size_t>(i)] / bernoulli_kl(mean, best);
    curve.arm_indices.push_back(i);
    curve.log_coefficients.push_back(coeff);
    curve.total_log_coefficient += coeff;
  }

  curve.per_arm_terms.resize(curve.horizons.size());
  curve.totals.resize(curve.horizons.size());
  for (std::size_t g = 0; g < curve.horizons.size(); ++g) {
    const double horizon = curve.horizons[g];
    if (!(horizon >= 1.0)) {
      throw std::invalid_argument("lb curve horizons must be >= 1");
    }
    const double log_t = std::log(horizon);
    auto& terms = curve.per_arm_terms[g];
    terms.resize(curve.log_coefficients.size());
    double total = 0.0;
    for (std::size_t k = 0; k < curve.log_coefficients.size(); ++k) {
      terms[k] = curve.log_coefficients[k] * log_t;
      total += terms[k];
    }
    curve.totals[g] = total;
  }
  return curve;
}

}  // namespace kcmab
