#pragma once

// Shared fixtures for the test binaries: temp directories, record factories,
// and hand-rolled dataset builders that bypass the feature encoder.

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wfp/features.hpp"
#include "wfp/rng.hpp"
#include "wfp/synth.hpp"
#include "wfp/trace.hpp"

namespace wfp::test {

/// Self-cleaning unique directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& hint) {
    static std::atomic<unsigned> counter{0};
    const unsigned id = counter.fetch_add(1);
    dir_ = std::filesystem::temp_directory_path() /
           ("wfp-" + hint + "-" + std::to_string(::getpid()) + "-" + std::to_string(id));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path file(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// A fully populated, internally consistent record; tweak fields per test.
inline WorkloadRecord make_record(std::int64_t job_id = 1, int exit_status = 0) {
  WorkloadRecord r;
  r.job_id = job_id;
  r.owner = "u001";
  r.group = "g0";
  r.job_name = "blast_run_0001";
  r.granted_pe = "mpi";
  r.hostname = "cpu-1-2";
  r.submission = 1596240000;
  r.wait_time = 120;
  r.start_time = r.submission + r.wait_time;
  r.wallclock = 3600;
  r.end_time = r.start_time + r.wallclock;
  r.cpu = 3000.0;
  r.mem = 7200.0;
  r.io = 1.5;
  r.iow = 4.0;
  r.maxvmem = 2.5e9;
  r.slots = 2;
  r.wait_time = 120;
  r.exit_status = exit_status;
  return r;
}

/// Schema with only numeric passthrough columns; lets tests hand models a
/// dense matrix without running the encoder.
inline FeatureSchema numeric_only_schema(Eigen::Index d,
                                         FeatureMode mode = FeatureMode::runtime) {
  FeatureSchema s;
  s.mode = mode;
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::string name = "x" + std::to_string(j);
    s.numeric_columns.push_back(name);
    s.numeric_stats[name] = NumericStat{0.0, 1.0};
  }
  s.output_dimension = static_cast<std::size_t>(d);
  return s;
}

inline Dataset make_dataset(Eigen::MatrixXd X, std::vector<int> labels) {
  Dataset ds;
  ds.schema = numeric_only_schema(X.cols());
  ds.rows = std::move(X);
  ds.labels = std::move(labels);
  ds.row_provenance.resize(ds.labels.size());
  for (std::size_t i = 0; i < ds.row_provenance.size(); ++i) ds.row_provenance[i] = i;
  return ds;
}

/// Random dense matrix and labels from the project's deterministic generator.
inline Dataset random_dataset(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform(-2.0, 2.0);
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.4) ? 1 : 0;
  }
  // Tie the label loosely to the first feature so models have signal.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (X(i, 0) > 1.2) y[static_cast<std::size_t>(i)] = 1;
    if (X(i, 0) < -1.2) y[static_cast<std::size_t>(i)] = 0;
  }
  return make_dataset(std::move(X), std::move(y));
}

/// Small generated trace for integration-flavored unit tests.
inline GeneratorConfig small_generator(std::uint64_t seed, int days = 4,
                                       double jobs_per_day = 150.0) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.days = days;
  cfg.jobs_per_day_mean = jobs_per_day;
  cfg.n_users = 10;
  cfg.n_nodes = 40;
  cfg.n_racks = 10;
  return cfg;
}

}  // namespace wfp::test
