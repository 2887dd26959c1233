#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wfp/features.hpp"
#include "wfp/model.hpp"
#include "wfp/trace.hpp"

namespace wfp {

struct ConfusionCounts {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;  // positive class = failure
};

struct MetricScores {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double training_time = 0.0;  // seconds; carried alongside, not derived
};

/// Recall, precision and F1 from a confusion table; 0/0 denominators yield 0.
MetricScores metrics(const ConfusionCounts& c);

/// Seeded uniform shuffle then contiguous partition. Sizes are floor(n*f)
/// with remainder rows assigned to the training part.
struct HoldoutFractions {
  double train = 0.65, validation = 0.15, test = 0.20;
};

struct DatasetSplit {
  Dataset train, validation, test;
};
DatasetSplit split_holdout(const Dataset& data, const HoldoutFractions& f,
                           std::uint64_t seed);

/// Record-level variant with the same shuffle and floor rule, used by the
/// pipeline so feature schemas can be fitted on the training records only.
struct RecordSplit {
  RecordSet train, validation, test;
};
RecordSplit split_records(const RecordSet& rs, const HoldoutFractions& f,
                          std::uint64_t seed);

struct EvalResult {
  ConfusionCounts counts;
  MetricScores scores;
};

/// Predicts every test row and tallies the confusion table. Optionally
/// returns the per-row predictions in test-row order.
EvalResult evaluate(const TrainedModel& model, const Dataset& test,
                    std::vector<Prediction>* predictions_out = nullptr);

struct SweepRow {
  int days = 0;
  std::int64_t train_rows = 0;
  ConfusionCounts counts;
  MetricScores scores;  // training_time filled from the measured fit
};
struct SweepReport {
  std::vector<SweepRow> rows;
};

/// Trains on the first `d` days of submissions for each d in the grid and
/// evaluates on a fixed final-window test set (last `test_fraction` of the
/// trace by submission time), so the grid points are comparable.
SweepReport sweep_training_size(const RecordSet& full, const std::vector<int>& day_grid,
                                FeatureMode mode, const ModelSpec& spec,
                                double test_fraction = 0.20,
                                std::int64_t tz_offset = 0,
                                double name_similarity_threshold = 0.8);

struct GroupRate {
  std::int64_t count = 0;
  std::int64_t failures = 0;
  double rate() const {
    return count > 0 ? static_cast<double>(failures) / static_cast<double>(count) : 0.0;
  }
};

struct CharacterizationReport {
  std::map<std::string, GroupRate> by_node;
  std::map<std::pair<int, int>, GroupRate> by_rack_chassis;  // key (rack, chassis)
  std::map<std::string, GroupRate> by_user;
  std::array<GroupRate, 24> by_hour{};
  std::array<GroupRate, 7> by_dow{};  // 0 = Monday
  std::map<std::int64_t, GroupRate> by_wallclock_bin;  // key = bin start, seconds
  std::int64_t wallclock_bin_width = 0;
  std::int64_t total = 0;
  std::int64_t total_failures = 0;
};

/// Group-by failure counts and rates over a filtered, labelable record set.
/// Hostnames of the form "<prefix>-<rack>-<chassis>" feed the rack/chassis
/// matrix; unparsable hostnames land in the (0, 0) cell so every grouping
/// still partitions the input.
CharacterizationReport characterize(const RecordSet& rs,
                                    std::int64_t wallclock_bin_width = 6000,
                                    std::int64_t tz_offset = 0);

}  // namespace wfp
