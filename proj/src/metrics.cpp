#include "kcmab/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace kcmab {

namespace {

void require_trace_matches(const EpisodeTrace& trace,
                           const BanditInstance& instance) {
  if (!trace.instance_id.empty() && trace.instance_id != instance.id()) {
    throw std::invalid_argument("trace was recorded on a different instance: " +
                                trace.instance_id + " vs " + instance.id());
  }
  for (const StepRecord& s : trace.steps) {
    if (s.arm < 0 || s.arm >= instance.num_arms()) {
      throw std::invalid_argument("trace contains an out-of-range arm");
    }
  }
}

}  // namespace

std::string metric_name(MetricKind kind, int arm) {
  switch (kind) {
    case MetricKind::pseudo_regret: return "pseudo_regret";
    case MetricKind::realized_regret: return "realized_regret";
    case MetricKind::compensation_total: return "compensation_total";
    case MetricKind::compensation_per_arm:
      if (arm < 0) throw std::invalid_argument("per-arm metric needs an arm");
      return "compensation_arm_" + std::to_string(arm + 1);
  }
  throw std::invalid_argument("unknown metric kind");
}

std::vector<double> pseudo_regret_curve(const EpisodeTrace& trace,
                                        const BanditInstance& instance) {
  require_trace_matches(trace, instance);
  std::vector<double> curve(trace.steps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    acc += instance.gaps()[static_cast<std::size_t>(trace.steps[i].arm)];
    curve[i] = acc;
  }
  return curve;
}

std::vector<double> realized_regret_curve(const EpisodeTrace& trace,
                                          const BanditInstance& instance) {
  require_trace_matches(trace, instance);
  std::vector<double> curve(trace.steps.size());
  double reward_acc = 0.0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    reward_acc += trace.steps[i].reward;
    curve[i] = static_cast<double>(i + 1) * instance.best_mean() - reward_acc;
  }
  return curve;
}

std::vector<double> compensation_curve(const EpisodeTrace& trace) {
  std::vector<double> curve(trace.steps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    acc += trace.steps[i].compensation;
    curve[i] = acc;
  }
  return curve;
}

std::vector<double> compensation_curve_for_arm(const EpisodeTrace& trace,
                                               int arm) {
  std::vector<double> curve(trace.steps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i].arm == arm) acc += trace.steps[i].compensation;
    curve[i] = acc;
  }
  return curve;
}

std::vector<std::vector<double>> per_arm_compensation_curves(
    const EpisodeTrace& trace, int num_arms) {
  std::vector<std::vector<double>> curves(
      static_cast<std::size_t>(num_arms),
      std::vector<double>(trace.steps.size(), 0.0));
  std::vector<double> acc(static_cast<std::size_t>(num_arms), 0.0);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepRecord& s = trace.steps[i];
    if (s.arm < 0 || s.arm >= num_arms) {
      throw std::invalid_argument("trace contains an out-of-range arm");
    }
    acc[static_cast<std::size_t>(s.arm)] += s.compensation;
    for (int a = 0; a < num_arms; ++a) {
      curves[static_cast<std::size_t>(a)][i] = acc[static_cast<std::size_t>(a)];
    }
  }
  return curves;
}

std::vector<std::int64_t> thin_timesteps(std::int64_t horizon,
                                         std::int64_t stride) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  std::vector<std::int64_t> ts;
  ts.reserve(static_cast<std::size_t>(horizon / stride + 1));
  for (std::int64_t t = stride; t <= horizon; t += stride) ts.push_back(t);
  if (horizon % stride != 0) ts.push_back(horizon);
  return ts;
}

std::vector<double> thin_curve(std::span<const double> curve,
                               std::int64_t stride) {
  const auto keep =
      thin_timesteps(static_cast<std::int64_t>(curve.size()), stride);
  std::vector<double> out(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out[i] = curve[static_cast<std::size_t>(keep[i] - 1)];
  }
  return out;
}

std::vector<CurvePoint> aggregate(const std::vector<std::vector<double>>& curves,
                                  std::int64_t stride) {
  if (curves.empty()) throw std::invalid_argument("aggregate of zero curves");
  const std::size_t len = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != len) {
      throw std::invalid_argument("aggregate needs equal-length curves");
    }
  }
  if (len == 0) throw std::invalid_argument("aggregate of empty curves");

  const auto keep = thin_timesteps(static_cast<std::int64_t>(len), stride);
  const auto reps = curves.size();
  std::vector<CurvePoint> points(keep.size());

  // Each retained column reduces independently, summed in replication
  // order; parallel-safe and bit-stable across thread counts.
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(keep.size()); ++j) {
    const std::size_t col = static_cast<std::size_t>(keep[static_cast<std::size_t>(j)] - 1);
    double sum = 0.0;
    double sumsq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double v = curves[r][col];
      sum += v;
      sumsq += v * v;
    }
    const double n = static_cast<double>(reps);
    const double mean = sum / n;
    double se = 0.0;
    if (reps > 1) {
      double var = (sumsq - n * mean * mean) / (n - 1.0);
      if (var < 0.0) var = 0.0;  // guard tiny negative from cancellation
      se = std::sqrt(var / n);
    }
    points[static_cast<std::size_t>(j)] =
        CurvePoint{keep[static_cast<std::size_t>(j)], mean, se,
                   static_cast<int>(reps)};
  }
  return points;
}

}  // namespace kcmab
