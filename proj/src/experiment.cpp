#include "kcmab/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kcmab {

const char* to_string(RewardLaw law) {
  switch (law) {
    case RewardLaw::bernoulli: return "bernoulli";
    case RewardLaw::two_point: return "two-point";
  }
  return "?";
}

RewardLaw parse_reward_law(const std::string& name) {
  if (name == "bernoulli") return RewardLaw::bernoulli;
  if (name == "two-point") return RewardLaw::two_point;
  throw std::invalid_argument("unknown reward law '" + name +
                              "' (expected bernoulli or two-point)");
}

void validate(const ExperimentConfig& config) {
  if (config.means.size() < 2) {
    throw std::invalid_argument("config.means: need at least two arms");
  }
  for (double m : config.means) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw std::invalid_argument("config.means: entries must lie in [0,1]");
    }
  }
  if (config.horizon < static_cast<std::int64_t>(config.means.size())) {
    throw std::invalid_argument(
        "config.horizon: must be >= the number of arms");
  }
  if (config.replications < 1) {
    throw std::invalid_argument("config.replications: must be >= 1");
  }
  if (config.thin < 1) {
    throw std::invalid_argument("config.thin: must be >= 1");
  }
  if (config.policies.empty()) {
    throw std::invalid_argument("config.policies: need at least one policy");
  }
  for (const PolicySpec& p : config.policies) {
    if (p.kind == PolicyKind::eps_greedy && !(p.epsilon > 0.0)) {
      throw std::invalid_argument(
          "config.policies: eps-greedy needs epsilon > 0");
    }
  }
  if (config.max_threads < 0) {
    throw std::invalid_argument("config.max_threads: must be >= 0");
  }
}

BanditInstance make_instance(const ExperimentConfig& config) {
  std::vector<ArmDistribution> arms;
  arms.reserve(config.means.size());
  for (double m : config.means) {
    switch (config.law) {
      case RewardLaw::bernoulli:
        arms.push_back(ArmDistribution::bernoulli(m));
        break;
      case RewardLaw::two_point: {
        const double spread = m < 1.0 - m ? m : 1.0 - m;
        arms.push_back(ArmDistribution::discrete_bounded(
            {m - spread, m + spread}, {0.5, 0.5}));
        break;
      }
    }
  }
  return BanditInstance(std::move(arms));
}

namespace {

int worker_count(const ExperimentConfig& config) {
#ifdef _OPENMP
  if (config.max_threads > 0) return config.max_threads;
  return omp_get_max_threads();
#else
  (void)config;
  return 1;
#endif
}

// Thinned metric curves of one replication, in emission order:
// pseudo, realized, compensation, then one per arm.
std::vector<std::vector<double>> replication_curves(
    const PolicySpec& policy, const BanditInstance& instance,
    const ExperimentConfig& config, int replication) {
  const EpisodeTrace trace =
      run_episode(policy, instance, config.horizon, config.base_seed,
                  static_cast<std::uint64_t>(replication));
  std::vector<std::vector<double>> out;
  out.reserve(3 + static_cast<std::size_t>(instance.num_arms()));
  out.push_back(thin_curve(pseudo_regret_curve(trace, instance), config.thin));
  out.push_back(
      thin_curve(realized_regret_curve(trace, instance), config.thin));
  out.push_back(thin_curve(compensation_curve(trace), config.thin));
  for (auto& per_arm :
       per_arm_compensation_curves(trace, instance.num_arms())) {
    out.push_back(thin_curve(per_arm, config.thin));
  }
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const BanditInstance instance = make_instance(config);
  const int num_arms = instance.num_arms();
  const std::vector<std::int64_t> grid =
      thin_timesteps(config.horizon, config.thin);
  const std::size_t num_metrics = 3 + static_cast<std::size_t>(num_arms);
  const int reps = config.replications;

  std::vector<ResultRow> rows;
  rows.reserve(config.policies.size() * num_metrics * grid.size());

  std::vector<std::string> metric_labels;
  metric_labels.push_back(metric_name(MetricKind::pseudo_regret));
  metric_labels.push_back(metric_name(MetricKind::realized_regret));
  metric_labels.push_back(metric_name(MetricKind::compensation_total));
  for (int a = 0; a < num_arms; ++a) {
    metric_labels.push_back(metric_name(MetricKind::compensation_per_arm, a));
  }

  for (const PolicySpec& policy : config.policies) {
    // One thinned curve per (metric, replication); rows are written by
    // replication index, so the fill order cannot affect the result.
    std::vector<std::vector<std::vector<double>>> curves(
        num_metrics, std::vector<std::vector<double>>(
                         static_cast<std::size_t>(reps)));
    if (config.parallel) {
      const int workers = worker_count(config);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
      for (int r = 0; r < reps; ++r) {
        auto per_rep = replication_curves(policy, instance, config, r);
        for (std::size_t m = 0; m < num_metrics; ++m) {
          curves[m][static_cast<std::size_t>(r)] = std::move(per_rep[m]);
        }
      }
    } else {
      // Serial reference path; must produce the same rows bit for bit.
      for (int r = 0; r < reps; ++r) {
        auto per_rep = replication_curves(policy, instance, config, r);
        for (std::size_t m = 0; m < num_metrics; ++m) {
          curves[m][static_cast<std::size_t>(r)] = std::move(per_rep[m]);
        }
      }
    }

    const std::string policy_id = policy.id();
    for (std::size_t m = 0; m < num_metrics; ++m) {
      const std::vector<CurvePoint> points = aggregate(curves[m], 1);
      for (std::size_t j = 0; j < points.size(); ++j) {
        rows.push_back(ResultRow{policy_id, metric_labels[m], grid[j],
                                 points[j].mean, points[j].std_error,
                                 points[j].n_reps});
      }
    }
  }
  return rows;
}

std::string render_csv(const ExperimentConfig& config,
                       const std::vector<ResultRow>& rows) {
  validate(config);
  std::string out;
  out.reserve(rows.size() * 48 + 512);
  char buf[160];

  out += "# kcmab simulate\n";
  out += "# instance=" + make_instance(config).id() + "\n";
  out += std::string("# law=") + to_string(config.law) + "\n";
  std::snprintf(buf, sizeof(buf), "# horizon=%lld\n",
                static_cast<long long>(config.horizon));
  out += buf;
  std::snprintf(buf, sizeof(buf), "# replications=%d\n", config.replications);
  out += buf;
  std::snprintf(buf, sizeof(buf), "# base_seed=%llu\n",
                static_cast<unsigned long long>(config.base_seed));
  out += buf;
  std::snprintf(buf, sizeof(buf), "# thin=%lld\n",
                static_cast<long long>(config.thin));
  out += buf;
  out += "# policies=";
  for (std::size_t i = 0; i < config.policies.size(); ++i) {
    if (i > 0) out += ";";
    out += config.policies[i].id();
  }
  out += "\n";
  out += "# rng=pcg32-xsh-rr-64-32, stream_id=replication index\n";
  out += "# init_compensation=0\n";
  out += "policy,metric,t,mean,stderr,n_reps\n";

  for (const ResultRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%lld,%.9g,%.9g,%d\n",
                  row.policy.c_str(), row.metric.c_str(),
                  static_cast<long long>(row.t), row.mean, row.std_error,
                  row.n_reps);
    out += buf;
  }
  return out;
}

void write_csv_file(const ExperimentConfig& config,
                    const std::vector<ResultRow>& rows,
                    const std::string& path) {
  const std::string text = render_csv(config, rows);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  file << text;
  if (!file) throw std::runtime_error("failed while writing: " + path);
}

std::vector<double> preset_means() {
  return {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig config;
  config.means = preset_means();
  config.law = RewardLaw::bernoulli;
  config.horizon = 10000;
  config.replications = 1000;
  config.thin = 10;

  if (name == "figure1") {
    config.policies = {PolicySpec{PolicyKind::ucb, 0.0},
                       PolicySpec{PolicyKind::eps_greedy, 20.0},
                       PolicySpec{PolicyKind::mod_ts, 0.0}};
  } else if (name == "figure2") {
    config.policies = {PolicySpec{PolicyKind::classic_ts, 0.0},
                       PolicySpec{PolicyKind::mod_ts, 0.0}};
  } else if (name == "figure3") {
    config.policies = {PolicySpec{PolicyKind::eps_greedy, 10.0},
                       PolicySpec{PolicyKind::eps_greedy, 15.0},
                       PolicySpec{PolicyKind::eps_greedy, 20.0}};
  } else {
    std::string known;
    for (const auto& [preset_name, description] : preset_catalog()) {
      (void)description;
      if (!known.empty()) known += ", ";
      known += preset_name;
    }
    throw std::invalid_argument("unknown preset '" + name +
                                "'; available: " + known);
  }
  return config;
}

std::vector<std::pair<std::string, std::string>> preset_catalog() {
  return {
      {"figure1", "ucb vs eps-greedy(20) vs mod-ts, nine arms, T=10000"},
      {"figure2", "classic-ts vs mod-ts, nine arms, T=10000"},
      {"figure3", "eps-greedy with epsilon 10/15/20, nine arms, T=10000"},
  };
}

}  // namespace kcmab
