#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wfp/eval.hpp"
#include "wfp/features.hpp"
#include "wfp/model.hpp"
#include "wfp/trace.hpp"

namespace wfp {

struct ResourceSnapshot {
  std::int64_t t = 0;      // seconds since job start
  double cru_cpu = 0.0;    // cpu-seconds consumed by time t
  double cru_mem = 0.0;    // GB·s consumed by time t
  double fru_cpu = 0.0;    // the job's final cpu usage
  double fru_mem = 0.0;
};

/// Linear resource model: cru = fru * min(t, wallclock) / wallclock.
ResourceSnapshot current_usage(const WorkloadRecord& r, std::int64_t t);

/// What to charge for a wrongly killed successful job: the resources it had
/// consumed by the kill (it reruns later), or its full final usage.
enum class RwMode { consumed, full };
enum class KillPolicy { absorbing, snapshots };

struct SavingsPoint {
  std::int64_t t = 0;
  double r_saving_cpu = 0.0;  // (r_s - r_w) / r_total; may be negative
  double r_saving_mem = 0.0;
  double r_s_cpu = 0.0, r_w_cpu = 0.0, r_total_cpu = 0.0;
  double r_s_mem = 0.0, r_w_mem = 0.0, r_total_mem = 0.0;
  std::int64_t n_running = 0;
  std::int64_t n_killed_correct = 0;
  std::int64_t n_killed_wrong = 0;
  ConfusionCounts counts_at_t;   // over running jobs only
  MetricScores metrics_at_t;
};

struct SavingsCurve {
  std::vector<SavingsPoint> points;
  int node_cores = 36;
};

/// Evaluates the kill-on-predicted-failure policy at a single checkpoint,
/// building for every still-running job a synthetic feature row with its
/// usage so far (cpu/mem from current_usage, wallclock = t) and predicting
/// with the runtime model. Requires t >= 1 so derived features stay defined.
SavingsPoint simulate_kill(const TrainedModel& model, const RecordSet& test,
                           const FeatureSchema& schema, std::int64_t t,
                           RwMode rw = RwMode::consumed);

/// Predictor seam for oracle tests: decides per running record at time t.
using PredictorFn = std::function<Prediction(const WorkloadRecord& r, std::int64_t t)>;

/// Core accounting shared by the model path and the stub-predictor path.
/// `alive` masks jobs already killed at earlier checkpoints (may be null);
/// `killed_out`, when non-null, is set per test record for absorbing curves.
SavingsPoint simulate_kill_with(const PredictorFn& predictor, const RecordSet& test,
                                std::int64_t t, RwMode rw,
                                const std::vector<bool>* alive = nullptr,
                                std::vector<bool>* killed_out = nullptr);

/// One SavingsPoint per grid time. Absorbing (default): a job killed at one
/// checkpoint leaves the simulation; snapshots: every point independent.
SavingsCurve savings_curve(const TrainedModel& model, const RecordSet& test,
                           const FeatureSchema& schema,
                           const std::vector<std::int64_t>& t_grid,
                           RwMode rw = RwMode::consumed,
                           KillPolicy policy = KillPolicy::absorbing,
                           int node_cores = 36);

/// cpu_seconds expressed as days of one fully busy node_cores-core node.
double node_days(double cpu_seconds, int node_cores);

}  // namespace wfp
