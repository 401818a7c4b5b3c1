// Command-line front end: `simulate` runs replicated episodes and writes
// aggregated regret/compensation curves as CSV, `lower-bound` evaluates
// the stopping-value table and the log-growth reference curve, `presets`
// lists the canned experiment configurations.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kcmab/experiment.hpp"
#include "kcmab/lower_bound.hpp"

namespace {

using namespace kcmab;

PolicyKind parse_policy_kind(const std::string& token) {
  if (token == "ucb") return PolicyKind::ucb;
  if (token == "eps-greedy") return PolicyKind::eps_greedy;
  if (token == "mod-ts") return PolicyKind::mod_ts;
  if (token == "classic-ts") return PolicyKind::classic_ts;
  if (token == "greedy") return PolicyKind::greedy;
  throw std::invalid_argument(
      "unknown policy '" + token +
      "' (expected ucb, eps-greedy, mod-ts, classic-ts or greedy)");
}

// Pairs --policy tokens with --epsilon values. A single eps-greedy token
// expands into one policy per epsilon; several eps-greedy tokens must
// match the epsilon list one to one. Without --epsilon, eps-greedy runs
// at the default epsilon of 20.
std::vector<PolicySpec> build_policies(const std::vector<std::string>& tokens,
                                       const std::vector<double>& epsilons) {
  int greedy_epsilon_slots = 0;
  for (const auto& token : tokens) {
    if (token == "eps-greedy") ++greedy_epsilon_slots;
  }
  if (greedy_epsilon_slots == 0 && !epsilons.empty()) {
    throw std::invalid_argument("--epsilon given without an eps-greedy policy");
  }
  if (greedy_epsilon_slots > 1 && !epsilons.empty() &&
      epsilons.size() != static_cast<std::size_t>(greedy_epsilon_slots)) {
    throw std::invalid_argument(
        "number of --epsilon values must match the eps-greedy policies");
  }

  std::vector<PolicySpec> specs;
  std::size_t next_epsilon = 0;
  for (const auto& token : tokens) {
    const PolicyKind kind = parse_policy_kind(token);
    if (kind != PolicyKind::eps_greedy) {
      specs.push_back(PolicySpec{kind, 0.0});
      continue;
    }
    if (epsilons.empty()) {
      specs.push_back(PolicySpec{kind, 20.0});
    } else if (greedy_epsilon_slots == 1) {
      for (double eps : epsilons) specs.push_back(PolicySpec{kind, eps});
    } else {
      specs.push_back(PolicySpec{kind, epsilons[next_epsilon++]});
    }
  }
  return specs;
}

int env_thread_override() {
  const char* raw = std::getenv("KCMAB_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const int value = std::atoi(raw);
  if (value < 1) {
    throw std::invalid_argument("KCMAB_THREADS must be a positive integer");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::string strip(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& key) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) {
    try {
      values.push_back(std::stod(strip(part)));
    } catch (...) {
      throw std::invalid_argument("config key '" + key +
                                  "': cannot parse '" + part + "' as a number");
    }
  }
  return values;
}

// Flat key=value configuration file. Supported keys: preset, means, law,
// T, reps, seed, thin, policy, epsilon, out. '#' starts a comment; later
// assignments win; command-line flags override everything.
struct FileConfig {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const std::string& get(const std::string& key) const {
    return values.at(key);
  }
};

FileConfig load_config_file(const std::string& path) {
  static const std::set<std::string> known = {
      "preset", "means", "law",     "T",   "reps",
      "seed",   "thin",  "policy", "epsilon", "out"};
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open config file: " + path);
  FileConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                  ": expected key=value");
    }
    const std::string key = strip(line.substr(0, eq));
    if (known.count(key) == 0) {
      std::string keys;
      for (const auto& k : known) {
        if (!keys.empty()) keys += ", ";
        keys += k;
      }
      throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                  ": unknown key '" + key + "' (known: " +
                                  keys + ")");
    }
    config.values[key] = strip(line.substr(eq + 1));
  }
  return config;
}

int run_simulate(const ExperimentConfig& config, const std::string& out_path) {
  validate(config);
  const auto rows = run_experiment(config);
  write_csv_file(config, rows, out_path);
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return 0;
}

int run_lower_bound(const std::vector<double>& mus, std::int64_t horizon,
                    const std::vector<double>& means,
                    const std::vector<double>& grid,
                    const std::string& out_path) {
  std::string text;
  char buf[192];
  text += "# kcmab lower-bound\n";
  text += "record,mu,T,value,threshold,pass\n";

  // Stopping values for every horizon up to the cap, against both floors.
  int failed_floors = 0;
  for (double mu : mus) {
    const double half = mu / 2.0;
    const double closed = mu - 1.5 * std::sqrt(mu * (1.0 - mu));
    for (std::int64_t t = 1; t <= horizon; ++t) {
      const double value = dp_value(mu, t);
      const bool half_ok = value >= half;
      const bool closed_ok = value >= closed - 1e-12;
      failed_floors += (half_ok ? 0 : 1) + (closed_ok ? 0 : 1);
      std::snprintf(buf, sizeof(buf), "dp_half_floor,%.9g,%lld,%.9g,%.9g,%d\n",
                    mu, static_cast<long long>(t), value, half,
                    half_ok ? 1 : 0);
      text += buf;
      std::snprintf(buf, sizeof(buf),
                    "dp_closed_floor,%.9g,%lld,%.9g,%.9g,%d\n", mu,
                    static_cast<long long>(t), value, closed,
                    closed_ok ? 1 : 0);
      text += buf;
    }
  }

  // The log-growth reference curve of the instance.
  const auto instance = BanditInstance::bernoulli(means);
  const auto curve = compensation_lb_curve(instance, grid);
  for (std::size_t g = 0; g < curve.horizons.size(); ++g) {
    std::snprintf(buf, sizeof(buf), "lb_total,,%.9g,%.9g,,\n",
                  curve.horizons[g], curve.totals[g]);
    text += buf;
    for (std::size_t k = 0; k < curve.arm_indices.size(); ++k) {
      const int arm = curve.arm_indices[k];
      std::snprintf(buf, sizeof(buf), "lb_arm_%d,%.9g,%.9g,%.9g,,\n", arm + 1,
                    instance.means()[static_cast<std::size_t>(arm)],
                    curve.horizons[g], curve.per_arm_terms[g][k]);
      text += buf;
    }
  }

  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file: " + out_path);
  file << text;
  if (!file) throw std::runtime_error("failed while writing: " + out_path);

  std::cout << "wrote stopping values for " << mus.size() << " mu value(s), T <= "
            << horizon << ", and " << grid.size()
            << " reference-curve point(s) to " << out_path << "\n";
  if (failed_floors > 0) {
    std::cout << "floor violations: " << failed_floors << "\n";
  }
  return 0;
}

int run_presets() {
  for (const auto& [name, description] : preset_catalog()) {
    const auto config = preset(name);
    std::cout << name << ": " << description << "\n  policies:";
    for (const auto& policy : config.policies) {
      std::cout << " " << policy.id();
    }
    std::cout << "\n  horizon=" << config.horizon
              << " replications=" << config.replications
              << " thin=" << config.thin << " seed=" << config.base_seed
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incentivized multi-armed bandit simulator"};
  app.require_subcommand(1);

  // -- simulate ---------------------------------------------------------
  auto* sim = app.add_subcommand(
      "simulate", "Run replicated episodes and write aggregated curves");
  std::string config_path;
  sim->add_option("--config", config_path,
                  "Flat key=value file; command-line flags win");
  std::string preset_name;
  std::string out_path = "results.csv";
  std::string law_name = "bernoulli";
  std::vector<std::string> policy_tokens;
  std::vector<double> epsilons;
  std::vector<double> means;
  std::int64_t horizon = 10000;
  int replications = 1000;
  std::uint64_t seed = 12345;
  std::int64_t thin = 10;
  bool serial = false;
  sim->add_option("--preset", preset_name,
                  "Start from a canned configuration (see `presets`)");
  sim->add_option("--T", horizon, "Horizon (steps per episode)");
  sim->add_option("--reps", replications, "Number of replications");
  sim->add_option("--seed", seed, "Base seed; replication r uses stream r");
  sim->add_option("--thin", thin, "Keep every thin-th timestep in the output");
  sim->add_option("--out", out_path, "Output CSV path");
  sim->add_option("--policy", policy_tokens,
                  "Policy to run (repeatable): ucb, eps-greedy, mod-ts, "
                  "classic-ts, greedy");
  sim->add_option("--epsilon", epsilons,
                  "Epsilon for eps-greedy (repeatable)");
  sim->add_option("--means", means, "Arm means, comma separated")
      ->delimiter(',');
  sim->add_option("--law", law_name, "Reward law: bernoulli or two-point");
  sim->add_flag("--serial", serial, "Run replications on one thread");

  // -- lower-bound ------------------------------------------------------
  auto* lb = app.add_subcommand(
      "lower-bound",
      "Evaluate stopping values, their floors, and the log reference curve");
  std::vector<double> mus = {0.9, 0.95, 0.99};
  std::int64_t dp_horizon = 500;
  std::vector<double> lb_means = kcmab::preset_means();
  std::vector<double> grid = {1000, 2000, 3000, 4000, 5000,
                              6000, 7000, 8000, 9000, 10000};
  std::string lb_out = "lower_bound.csv";
  lb->add_option("--mu", mus, "Best-arm mean(s) for the stopping table");
  lb->add_option("--T", dp_horizon, "Largest stopping-table horizon");
  lb->add_option("--means", lb_means, "Instance means for the reference curve")
      ->delimiter(',');
  lb->add_option("--T-grid", grid, "Horizons for the reference curve")
      ->delimiter(',');
  lb->add_option("--out", lb_out, "Output CSV path");

  // -- presets ----------------------------------------------------------
  app.add_subcommand("presets", "List the canned experiment configurations");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      FileConfig file;
      if (!config_path.empty()) file = load_config_file(config_path);

      const auto int64_key = [&](const char* key) {
        try {
          return static_cast<std::int64_t>(std::stoll(file.get(key)));
        } catch (...) {
          throw std::invalid_argument(std::string("config key '") + key +
                                      "': expected an integer");
        }
      };

      // Precedence: library defaults, then preset, then config file,
      // then command-line flags.
      std::string chosen_preset = preset_name;
      if (chosen_preset.empty() && file.has("preset")) {
        chosen_preset = file.get("preset");
      }
      ExperimentConfig config;
      bool have_policies = false;
      if (!chosen_preset.empty()) {
        config = kcmab::preset(chosen_preset);
        have_policies = true;
      }

      if (file.has("T")) config.horizon = int64_key("T");
      if (file.has("reps")) config.replications = static_cast<int>(int64_key("reps"));
      if (file.has("seed")) config.base_seed = static_cast<std::uint64_t>(int64_key("seed"));
      if (file.has("thin")) config.thin = int64_key("thin");
      if (file.has("means")) {
        config.means = parse_double_list(file.get("means"), "means");
      }
      if (file.has("law")) config.law = parse_reward_law(file.get("law"));

      std::vector<std::string> tokens = policy_tokens;
      if (tokens.empty() && file.has("policy")) {
        for (const auto& part : split(file.get("policy"), ',')) {
          tokens.push_back(strip(part));
        }
      }
      std::vector<double> eps_values = epsilons;
      if (eps_values.empty() && file.has("epsilon")) {
        eps_values = parse_double_list(file.get("epsilon"), "epsilon");
      }
      if (!tokens.empty()) {
        config.policies = build_policies(tokens, eps_values);
        have_policies = true;
      } else if (!eps_values.empty()) {
        throw std::invalid_argument(
            "--epsilon needs an eps-greedy policy (presets fix their own)");
      }

      if (sim->count("--T") > 0) config.horizon = horizon;
      if (sim->count("--reps") > 0) config.replications = replications;
      if (sim->count("--seed") > 0) config.base_seed = seed;
      if (sim->count("--thin") > 0) config.thin = thin;
      if (sim->count("--means") > 0) config.means = means;
      if (sim->count("--law") > 0) config.law = parse_reward_law(law_name);

      if (!have_policies) {
        throw std::invalid_argument(
            "choose --preset or at least one policy (flag or config file)");
      }
      if (chosen_preset.empty() && config.means.empty()) {
        config.means = kcmab::preset_means();
      }
      std::string out = out_path;
      if (sim->count("--out") == 0 && file.has("out")) out = file.get("out");
      config.parallel = !serial;
      config.max_threads = env_thread_override();
      return run_simulate(config, out);
    }
    if (lb->parsed()) {
      if (dp_horizon < 1) {
        throw std::invalid_argument("--T must be >= 1");
      }
      return run_lower_bound(mus, dp_horizon, lb_means, grid, lb_out);
    }
    return run_presets();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
