#include "wfp/remediate.hpp"

#include <algorithm>
#include <stdexcept>

namespace wfp {

ResourceSnapshot current_usage(const WorkloadRecord& r, std::int64_t t) {
  if (r.wallclock <= 0) {
    throw std::invalid_argument("current_usage: degenerate wallclock for job_id " +
                                std::to_string(r.job_id));
  }
  if (t < 0) throw std::invalid_argument("current_usage: t must be >= 0");
  ResourceSnapshot s;
  s.t = t;
  s.fru_cpu = r.cpu;
  s.fru_mem = r.mem;
  const double frac = static_cast<double>(std::min(t, r.wallclock)) /
                      static_cast<double>(r.wallclock);
  s.cru_cpu = r.cpu * frac;
  s.cru_mem = r.mem * frac;
  return s;
}

SavingsPoint simulate_kill_with(const PredictorFn& predictor, const RecordSet& test,
                                std::int64_t t, RwMode rw,
                                const std::vector<bool>* alive,
                                std::vector<bool>* killed_out) {
  if (test.records.empty()) throw std::invalid_argument("simulate_kill: empty test set");
  if (alive && alive->size() != test.records.size()) {
    throw std::invalid_argument("simulate_kill: alive mask size mismatch");
  }
  if (killed_out) killed_out->assign(test.records.size(), false);

  SavingsPoint p;
  p.t = t;
  for (std::size_t i = 0; i < test.records.size(); ++i) {
    const WorkloadRecord& r = test.records[i];
    // r_total spans the whole test set, finished or not, so the denominator
    // is the same at every checkpoint.
    p.r_total_cpu += r.cpu;
    p.r_total_mem += r.mem;

    if (alive && !(*alive)[i]) continue;
    if (r.wallclock <= t) continue;  // already finished at this checkpoint
    ++p.n_running;

    const bool is_failure = label_record(r).value == 1;
    const Prediction pred = predictor(r, t);
    const bool kill = pred.label == 1;
    if (kill && killed_out) (*killed_out)[i] = true;

    if (is_failure) {
      kill ? ++p.counts_at_t.tp : ++p.counts_at_t.fn;
    } else {
      kill ? ++p.counts_at_t.fp : ++p.counts_at_t.tn;
    }
    if (!kill) continue;

    const ResourceSnapshot usage = current_usage(r, t);
    if (is_failure) {
      ++p.n_killed_correct;
      p.r_s_cpu += usage.fru_cpu - usage.cru_cpu;
      p.r_s_mem += usage.fru_mem - usage.cru_mem;
    } else {
      ++p.n_killed_wrong;
      p.r_w_cpu += rw == RwMode::consumed ? usage.cru_cpu : usage.fru_cpu;
      p.r_w_mem += rw == RwMode::consumed ? usage.cru_mem : usage.fru_mem;
    }
  }
  if (p.r_total_cpu > 0.0) p.r_saving_cpu = (p.r_s_cpu - p.r_w_cpu) / p.r_total_cpu;
  if (p.r_total_mem > 0.0) p.r_saving_mem = (p.r_s_mem - p.r_w_mem) / p.r_total_mem;
  p.metrics_at_t = metrics(p.counts_at_t);
  return p;
}

namespace {

// Encodes all still-running rows at once with their usage-so-far features.
std::vector<Prediction> predict_running(const TrainedModel& model, const RecordSet& test,
                                        const FeatureSchema& schema, std::int64_t t,
                                        const std::vector<bool>* alive,
                                        std::vector<std::size_t>& running_idx) {
  running_idx.clear();
  RecordSet batch;
  batch.provenance = test.provenance;
  for (std::size_t i = 0; i < test.records.size(); ++i) {
    if (alive && !(*alive)[i]) continue;
    const WorkloadRecord& r = test.records[i];
    if (r.wallclock <= t) continue;
    WorkloadRecord synth = r;
    const ResourceSnapshot usage = current_usage(r, t);
    synth.cpu = usage.cru_cpu;
    synth.mem = usage.cru_mem;
    synth.wallclock = t;
    synth.end_time = synth.start_time + t;
    batch.records.push_back(synth);
    running_idx.push_back(i);
  }
  if (batch.records.empty()) return {};
  const Dataset ds = encode(batch, schema);
  return predict_all(model, ds.rows);
}

}  // namespace

SavingsPoint simulate_kill(const TrainedModel& model, const RecordSet& test,
                           const FeatureSchema& schema, std::int64_t t, RwMode rw) {
  if (t < 1) throw std::invalid_argument("simulate_kill: t must be >= 1");
  if (schema.mode != FeatureMode::runtime) {
    throw std::invalid_argument("simulate_kill: requires a runtime-mode schema");
  }
  check_fingerprint(model, schema);

  std::vector<std::size_t> running_idx;
  const auto preds = predict_running(model, test, schema, t, nullptr, running_idx);
  std::size_t cursor = 0;
  PredictorFn lookup = [&](const WorkloadRecord&, std::int64_t) {
    return preds[cursor++];
  };
  // predict_running and simulate_kill_with walk the records in the same
  // order, so the cursor pairs each running job with its batch prediction.
  return simulate_kill_with(lookup, test, t, rw, nullptr, nullptr);
}

SavingsCurve savings_curve(const TrainedModel& model, const RecordSet& test,
                           const FeatureSchema& schema,
                           const std::vector<std::int64_t>& t_grid, RwMode rw,
                           KillPolicy policy, int node_cores) {
  if (t_grid.empty()) throw std::invalid_argument("savings_curve: empty grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 1) throw std::invalid_argument("savings_curve: grid times must be >= 1");
    if (i > 0 && t_grid[i] <= t_grid[i - 1]) {
      throw std::invalid_argument("savings_curve: grid must be strictly increasing");
    }
  }
  if (schema.mode != FeatureMode::runtime) {
    throw std::invalid_argument("savings_curve: requires a runtime-mode schema");
  }
  check_fingerprint(model, schema);

  SavingsCurve curve;
  curve.node_cores = node_cores;
  std::vector<bool> alive(test.records.size(), true);
  std::vector<bool> killed;
  std::vector<std::size_t> running_idx;
  for (const std::int64_t t : t_grid) {
    const std::vector<bool>* mask = policy == KillPolicy::absorbing ? &alive : nullptr;
    const auto preds = predict_running(model, test, schema, t, mask, running_idx);
    std::size_t cursor = 0;
    PredictorFn lookup = [&](const WorkloadRecord&, std::int64_t) {
      return preds[cursor++];
    };
    SavingsPoint p = simulate_kill_with(lookup, test, t, rw, mask, &killed);
    if (policy == KillPolicy::absorbing) {
      for (std::size_t i = 0; i < killed.size(); ++i) {
        if (killed[i]) alive[i] = false;
      }
    }
    curve.points.push_back(p);
  }
  return curve;
}

double node_days(double cpu_seconds, int node_cores) {
  if (node_cores < 1) throw std::invalid_argument("node_days: node_cores must be >= 1");
  return cpu_seconds / (static_cast<double>(node_cores) * 86400.0);
}

}  // namespace wfp
