#include "wfp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wfp/calendar.hpp"
#include "wfp/rng.hpp"

namespace wfp {

MetricScores metrics(const ConfusionCounts& c) {
  MetricScores s;
  const double tp = static_cast<double>(c.tp);
  if (c.tp + c.fn > 0) s.recall = tp / static_cast<double>(c.tp + c.fn);
  if (c.tp + c.fp > 0) s.precision = tp / static_cast<double>(c.tp + c.fp);
  if (s.recall + s.precision > 0.0) {
    s.f1 = 2.0 * s.recall * s.precision / (s.recall + s.precision);
  }
  return s;
}

namespace {

void check_fractions(const HoldoutFractions& f) {
  if (!(f.train > 0.0) || !(f.validation > 0.0) || !(f.test > 0.0)) {
    throw std::invalid_argument("split: fractions must be positive");
  }
  if (std::abs(f.train + f.validation + f.test - 1.0) > 1e-9) {
    throw std::invalid_argument("split: fractions must sum to 1");
  }
}

/// Fisher-Yates over 0..n-1 with our deterministic generator.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

struct PartSizes {
  std::size_t train, validation, test;
};

PartSizes part_sizes(std::size_t n, const HoldoutFractions& f) {
  if (n < 3) throw std::invalid_argument("split: dataset smaller than 3 rows");
  PartSizes p;
  p.train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * f.train));
  p.validation = static_cast<std::size_t>(std::floor(static_cast<double>(n) * f.validation));
  p.test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * f.test));
  p.train += n - (p.train + p.validation + p.test);  // remainder to train
  return p;
}

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& idx,
                  std::size_t begin, std::size_t end) {
  Dataset out;
  out.schema = data.schema;
  out.rows.resize(static_cast<Eigen::Index>(end - begin), data.rows.cols());
  for (std::size_t k = begin; k < end; ++k) {
    const std::size_t src = idx[k];
    out.rows.row(static_cast<Eigen::Index>(k - begin)) =
        data.rows.row(static_cast<Eigen::Index>(src));
    out.labels.push_back(data.labels[src]);
    out.row_provenance.push_back(data.row_provenance[src]);
  }
  return out;
}

RecordSet take_records(const RecordSet& rs, const std::vector<std::size_t>& idx,
                       std::size_t begin, std::size_t end) {
  RecordSet out;
  out.provenance = rs.provenance;
  out.records.reserve(end - begin);
  for (std::size_t k = begin; k < end; ++k) out.records.push_back(rs.records[idx[k]]);
  return out;
}

}  // namespace

DatasetSplit split_holdout(const Dataset& data, const HoldoutFractions& f,
                           std::uint64_t seed) {
  check_fractions(f);
  const auto n = static_cast<std::size_t>(data.rows.rows());
  const PartSizes sizes = part_sizes(n, f);
  const auto idx = shuffled_indices(n, seed);
  DatasetSplit split;
  split.train = take_rows(data, idx, 0, sizes.train);
  split.validation = take_rows(data, idx, sizes.train, sizes.train + sizes.validation);
  split.test = take_rows(data, idx, sizes.train + sizes.validation, n);
  return split;
}

RecordSplit split_records(const RecordSet& rs, const HoldoutFractions& f,
                          std::uint64_t seed) {
  check_fractions(f);
  const std::size_t n = rs.records.size();
  const PartSizes sizes = part_sizes(n, f);
  const auto idx = shuffled_indices(n, seed);
  RecordSplit split;
  split.train = take_records(rs, idx, 0, sizes.train);
  split.validation = take_records(rs, idx, sizes.train, sizes.train + sizes.validation);
  split.test = take_records(rs, idx, sizes.train + sizes.validation, n);
  return split;
}

EvalResult evaluate(const TrainedModel& model, const Dataset& test,
                    std::vector<Prediction>* predictions_out) {
  check_fingerprint(model, test.schema);
  EvalResult res;
  res.scores.training_time = model.train_seconds;
  std::vector<Prediction> preds = predict_all(model, test.rows);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int truth = test.labels[i];
    const int guess = preds[i].label;
    if (truth == 1) {
      guess == 1 ? ++res.counts.tp : ++res.counts.fn;
    } else {
      guess == 1 ? ++res.counts.fp : ++res.counts.tn;
    }
  }
  const double t = res.scores.training_time;
  res.scores = metrics(res.counts);
  res.scores.training_time = t;
  if (predictions_out) *predictions_out = std::move(preds);
  return res;
}

SweepReport sweep_training_size(const RecordSet& full, const std::vector<int>& day_grid,
                                FeatureMode mode, const ModelSpec& spec,
                                double test_fraction, std::int64_t tz_offset,
                                double name_similarity_threshold) {
  if (day_grid.empty()) throw std::invalid_argument("sweep: empty day grid");
  if (full.records.empty()) throw std::invalid_argument("sweep: empty record set");
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
    throw std::invalid_argument("sweep: test_fraction must be in (0,1)");
  }

  const RecordSet normalized = normalize_job_names(full, name_similarity_threshold);
  std::int64_t lo = normalized.records.front().submission, hi = lo;
  for (const auto& r : normalized.records) {
    lo = std::min(lo, r.submission);
    hi = std::max(hi, r.submission);
  }
  const int span_days = static_cast<int>((hi - lo) / 86400) + 1;
  for (int d : day_grid) {
    if (d < 1) throw std::invalid_argument("sweep: day grid entries must be >= 1");
    if (d > span_days) {
      throw std::invalid_argument("sweep: grid day " + std::to_string(d) +
                                  " exceeds the trace span of " +
                                  std::to_string(span_days) + " days");
    }
  }

  // Fixed test window: the final test_fraction of the trace by time. Training
  // windows are clipped to end before it so no grid point leaks test rows.
  const std::int64_t test_start =
      lo + static_cast<std::int64_t>(
               std::llround((1.0 - test_fraction) * static_cast<double>(hi - lo)));
  RecordSet test_records;
  test_records.provenance = normalized.provenance;
  for (const auto& r : normalized.records) {
    if (r.submission >= test_start) test_records.records.push_back(r);
  }
  if (test_records.records.empty()) {
    throw std::invalid_argument("sweep: empty test window");
  }

  SweepReport report;
  for (int d : day_grid) {
    const std::int64_t train_end = std::min(test_start, lo + static_cast<std::int64_t>(d) * 86400);
    RecordSet train_records;
    train_records.provenance = normalized.provenance;
    for (const auto& r : normalized.records) {
      if (r.submission < train_end) train_records.records.push_back(r);
    }
    if (train_records.records.empty()) {
      throw std::invalid_argument("sweep: no training rows in the first " +
                                  std::to_string(d) + " days");
    }

    const FeatureSchema schema = fit_schema(train_records, mode, tz_offset);
    const Dataset train_ds = encode(train_records, schema);
    const Dataset test_ds = encode(test_records, schema);
    const TrainedModel model = train(spec, train_ds);

    SweepRow row;
    row.days = d;
    row.train_rows = static_cast<std::int64_t>(train_ds.rows.rows());
    const EvalResult res = evaluate(model, test_ds);
    row.counts = res.counts;
    row.scores = res.scores;
    report.rows.push_back(row);
  }
  return report;
}

namespace {

// Hostname "<prefix>-<rack>-<chassis>"; anything unparsable maps to (0, 0).
std::pair<int, int> rack_chassis(const std::string& hostname) {
  const std::size_t second = hostname.rfind('-');
  if (second == std::string::npos || second == 0) return {0, 0};
  const std::size_t first = hostname.rfind('-', second - 1);
  if (first == std::string::npos) return {0, 0};
  try {
    const int rack = std::stoi(hostname.substr(first + 1, second - first - 1));
    const int chassis = std::stoi(hostname.substr(second + 1));
    if (rack < 0 || chassis < 0) return {0, 0};
    return {rack, chassis};
  } catch (const std::exception&) {
    return {0, 0};
  }
}

}  // namespace

CharacterizationReport characterize(const RecordSet& rs, std::int64_t wallclock_bin_width,
                                    std::int64_t tz_offset) {
  if (rs.records.empty()) throw std::invalid_argument("characterize: empty record set");
  if (wallclock_bin_width < 1) {
    throw std::invalid_argument("characterize: bin width must be >= 1");
  }
  CharacterizationReport rep;
  rep.wallclock_bin_width = wallclock_bin_width;
  for (const auto& r : rs.records) {
    const bool failed = label_record(r).value == 1;
    auto tally = [&](GroupRate& g) {
      ++g.count;
      if (failed) ++g.failures;
    };
    tally(rep.by_node[r.hostname]);
    tally(rep.by_rack_chassis[rack_chassis(r.hostname)]);
    tally(rep.by_user[r.owner]);
    tally(rep.by_hour[static_cast<std::size_t>(hour_of_day(r.submission, tz_offset))]);
    tally(rep.by_dow[static_cast<std::size_t>(day_of_week(r.submission, tz_offset))]);
    tally(rep.by_wallclock_bin[(r.wallclock / wallclock_bin_width) * wallclock_bin_width]);
    ++rep.total;
    if (failed) ++rep.total_failures;
  }
  return rep;
}

}  // namespace wfp
