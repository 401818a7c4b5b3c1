// Compares the OpenMP kernels against their serial reference paths:
// replicated episode batches and the stopping-table fill. Verifies that
// both paths produce identical numbers before reporting timings.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kcmab/experiment.hpp"
#include "kcmab/lower_bound.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace kcmab;

double timed_ms(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool rows_identical(const std::vector<ResultRow>& a,
                    const std::vector<ResultRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].mean != b[i].mean || a[i].std_error != b[i].std_error) {
      return false;
    }
  }
  return true;
}

void print_row(const char* name, double serial_ms, double parallel_ms,
               bool identical) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms,
              identical ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial-vs-OpenMP benchmark"};
  int replications = 48;
  std::int64_t horizon = 10000;
  std::int64_t dp_horizon = 6000;
  app.add_option("--reps", replications, "Replications per policy");
  app.add_option("--T", horizon, "Episode horizon");
  app.add_option("--dp-T", dp_horizon, "Stopping-table horizon");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  for (PolicyKind kind : {PolicyKind::ucb, PolicyKind::mod_ts}) {
    ExperimentConfig config;
    config.means = preset_means();
    config.horizon = horizon;
    config.replications = replications;
    config.base_seed = 99;
    config.thin = 100;
    config.policies = {PolicySpec{kind, 0.0}};

    std::vector<ResultRow> serial_rows;
    std::vector<ResultRow> parallel_rows;
    config.parallel = false;
    const double serial_ms =
        timed_ms([&] { serial_rows = run_experiment(config); });
    config.parallel = true;
    const double parallel_ms =
        timed_ms([&] { parallel_rows = run_experiment(config); });

    const std::string name =
        std::string("episodes[") + to_string(kind) + "]";
    print_row(name.c_str(), serial_ms, parallel_ms,
              rows_identical(serial_rows, parallel_rows));
  }

  {
    DpTable serial_table = build_dp_table(0.5, 1, Execution::serial);
    DpTable parallel_table = build_dp_table(0.5, 1, Execution::serial);
    const double serial_ms = timed_ms(
        [&] { serial_table = build_dp_table(0.9, dp_horizon, Execution::serial); });
    const double parallel_ms = timed_ms([&] {
      parallel_table = build_dp_table(0.9, dp_horizon, Execution::parallel);
    });
    bool identical = serial_table.value() == parallel_table.value();
    for (std::int64_t t = 1; identical && t <= dp_horizon; ++t) {
      for (std::int64_t a = 0; a <= t; ++a) {
        if (serial_table.at(a, t - a) != parallel_table.at(a, t - a)) {
          identical = false;
          break;
        }
      }
    }
    print_row("stopping-table fill", serial_ms, parallel_ms, identical);
  }
  return 0;
}
