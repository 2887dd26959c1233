#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wfp/trace.hpp"

namespace wfp {

enum class FeatureMode { queue, runtime };

std::string to_string(FeatureMode mode);
FeatureMode feature_mode_from_string(const std::string& s);

struct DerivedFeatures {
  int hour_of_day = 0;   // 0..23, submission time shifted by tz offset
  int day_of_week = 0;   // 0 = Monday .. 6 = Sunday
  double cpu_intensity = 0.0;  // (cpu/slots)/wallclock
  double avg_mem = 0.0;        // mem/wallclock, GB
};

DerivedFeatures derive_features(const WorkloadRecord& r, std::int64_t tz_offset_seconds);

/// Normalized Levenshtein similarity in [0,1]; 1 for identical strings.
double edit_similarity(const std::string& a, const std::string& b);

/// Canonicalizes job names per owner: digit runs stripped and lowercased
/// names are single-link clustered at the given similarity threshold, and
/// every member takes the cluster's lexicographically smallest original name.
RecordSet normalize_job_names(const RecordSet& rs, double similarity_threshold);

struct NumericStat {
  double mean = 0.0;
  double stddev = 0.0;  // 0 marks a constant column; encoded as 0
};

struct FeatureSchema {
  FeatureMode mode = FeatureMode::queue;
  std::int64_t tz_offset = 0;
  std::vector<std::string> categorical_columns;
  std::map<std::string, std::vector<std::string>> categorical_vocab;
  std::vector<std::string> numeric_columns;
  std::map<std::string, NumericStat> numeric_stats;
  std::size_t output_dimension = 0;

  /// Expanded column names in encoding order, e.g. "owner=u001", "slots".
  std::vector<std::string> feature_names() const;

  std::string to_json_text() const;
  static FeatureSchema from_json_text(const std::string& text);

  /// Stable hash of the serialized schema; stored in trained models and
  /// checked before prediction.
  std::string fingerprint() const;
};

struct Dataset {
  Eigen::MatrixXd rows;  // n x output_dimension
  std::vector<int> labels;
  FeatureSchema schema;
  std::vector<std::size_t> row_provenance;  // index into the source RecordSet

  Eigen::Index size() const { return rows.rows(); }
};

/// Fits vocabularies and numeric statistics on the training records only.
FeatureSchema fit_schema(const RecordSet& train, FeatureMode mode,
                         std::int64_t tz_offset_seconds = 0);

/// One-hot encodes categoricals against the vocab (unseen values produce an
/// all-zero block) and standardizes numerics with the training statistics.
Dataset encode(const RecordSet& rs, const FeatureSchema& schema);

void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace wfp
