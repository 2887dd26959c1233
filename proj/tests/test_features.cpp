#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "wfp/features.hpp"

#include "test_util.hpp"

using namespace wfp;
using wfp::test::TempDir;
using wfp::test::make_record;
using wfp::test::small_generator;

TEST_SUITE_BEGIN("features");

TEST_CASE("derive_features computes the documented quantities") {
  const WorkloadRecord r = make_record();  // 2020-08-01 00:00 UTC, a Saturday
  const DerivedFeatures d = derive_features(r, 0);
  CHECK(d.hour_of_day == 0);
  CHECK(d.day_of_week == 5);
  CHECK(d.cpu_intensity == doctest::Approx((3000.0 / 2.0) / 3600.0).epsilon(1e-12));
  CHECK(d.avg_mem == doctest::Approx(7200.0 / 3600.0).epsilon(1e-12));

  const DerivedFeatures shifted = derive_features(r, 3600);
  CHECK(shifted.hour_of_day == 1);
  CHECK(shifted.day_of_week == 5);

  WorkloadRecord zero_wc = make_record();
  zero_wc.wallclock = 0;
  CHECK_THROWS_AS(derive_features(zero_wc, 0), std::invalid_argument);
  WorkloadRecord zero_slots = make_record();
  zero_slots.slots = 0;
  CHECK_THROWS_AS(derive_features(zero_slots, 0), std::invalid_argument);
}

TEST_CASE("edit_similarity is the normalized Levenshtein complement") {
  CHECK(edit_similarity("abc", "abc") == 1.0);
  CHECK(edit_similarity("", "") == 1.0);
  CHECK(edit_similarity("a", "") == 0.0);
  CHECK(edit_similarity("", "abcd") == 0.0);
  CHECK(edit_similarity("abc", "abd") == doctest::Approx(1.0 - 1.0 / 3.0).epsilon(1e-12));
  CHECK(edit_similarity("kitten", "sitting") ==
        doctest::Approx(1.0 - 3.0 / 7.0).epsilon(1e-12));
  CHECK(edit_similarity("abc", "abd") == edit_similarity("abd", "abc"));
}

TEST_CASE("normalize_job_names clusters per owner at the threshold") {
  RecordSet rs;
  auto add = [&](const std::string& owner, const std::string& name) {
    WorkloadRecord r = make_record(static_cast<std::int64_t>(rs.records.size() + 1));
    r.owner = owner;
    r.job_name = name;
    rs.records.push_back(r);
  };
  add("alice", "blast_run_012");
  add("alice", "blast_run_7");    // digits stripped: same stem -> clusters
  add("alice", "quantum_sim");    // unrelated name stays put
  add("bob", "blast_run_012");    // different owner: independent cluster

  const RecordSet out = normalize_job_names(rs, 0.8);
  REQUIRE(out.records.size() == 4);
  // Cluster members take the lexicographically smallest original name.
  CHECK(out.records[0].job_name == out.records[1].job_name);
  CHECK(out.records[0].job_name == std::min<std::string>("blast_run_012", "blast_run_7"));
  CHECK(out.records[2].job_name == "quantum_sim");
  CHECK(out.records[3].job_name == "blast_run_012");
  // Everything except job_name is untouched.
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(out.records[i].owner == rs.records[i].owner);
    CHECK(out.records[i].job_id == rs.records[i].job_id);
  }
}

TEST_CASE("normalize_job_names respects the similarity threshold") {
  RecordSet rs;
  auto add = [&](const std::string& name) {
    WorkloadRecord r = make_record(static_cast<std::int64_t>(rs.records.size() + 1));
    r.job_name = name;
    rs.records.push_back(r);
  };
  add("alpha_stage");
  add("alpha_stagf");  // similarity 10/11 after digit stripping

  CHECK(normalize_job_names(rs, 0.99).records[1].job_name == "alpha_stagf");
  CHECK(normalize_job_names(rs, 0.85).records[1].job_name == "alpha_stage");
}

TEST_CASE("fit_schema exposes the pinned columns per mode") {
  RecordSet rs;
  rs.records.push_back(make_record(1));
  const std::vector<std::string> cats = {"owner",    "group",       "job_name",
                                         "granted_pe", "hostname",  "hour_of_day",
                                         "day_of_week"};

  const FeatureSchema q = fit_schema(rs, FeatureMode::queue);
  CHECK(q.categorical_columns == cats);
  CHECK(q.numeric_columns == std::vector<std::string>{"slots"});

  const FeatureSchema rt = fit_schema(rs, FeatureMode::runtime);
  CHECK(rt.categorical_columns == cats);
  CHECK(rt.numeric_columns ==
        std::vector<std::string>{"slots", "cpu", "mem", "io", "iow", "maxvmem", "wallclock",
                                 "wait_time", "cpu_intensity", "avg_mem"});
  // Dimension = one-hot width + numeric count; one record means vocab size 1 each.
  CHECK(rt.output_dimension == cats.size() + rt.numeric_columns.size());
  CHECK(rt.feature_names().size() == rt.output_dimension);
  CHECK(rt.feature_names().front() == "owner=u001");
}

TEST_CASE("numeric statistics use the sample standard deviation") {
  RecordSet rs;
  for (int slots : {1, 2, 3, 4}) {
    WorkloadRecord r = make_record(slots);
    r.slots = slots;
    rs.records.push_back(r);
  }
  const FeatureSchema s = fit_schema(rs, FeatureMode::queue);
  const NumericStat& st = s.numeric_stats.at("slots");
  CHECK(st.mean == doctest::Approx(2.5).epsilon(1e-12));
  // Sample variance of {1,2,3,4} is 5/3.
  CHECK(st.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("encode standardizes numerics and one-hot encodes categoricals") {
  RecordSet train;
  for (int slots : {1, 2, 3, 4}) {
    WorkloadRecord r = make_record(slots);
    r.slots = slots;
    r.owner = slots <= 2 ? "alice" : "bob";
    train.records.push_back(r);
  }
  const FeatureSchema s = fit_schema(train, FeatureMode::queue);
  const Dataset ds = encode(train, s);
  REQUIRE(ds.rows.rows() == 4);
  REQUIRE(static_cast<std::size_t>(ds.rows.cols()) == s.output_dimension);
  CHECK(ds.schema.fingerprint() == s.fingerprint());
  CHECK(ds.row_provenance == std::vector<std::size_t>{0, 1, 2, 3});

  // Vocab order is sorted-set order: alice before bob.
  const auto names = s.feature_names();
  const auto alice = static_cast<Eigen::Index>(
      std::find(names.begin(), names.end(), "owner=alice") - names.begin());
  const auto bob = static_cast<Eigen::Index>(
      std::find(names.begin(), names.end(), "owner=bob") - names.begin());
  REQUIRE(alice < static_cast<Eigen::Index>(names.size()));
  REQUIRE(bob < static_cast<Eigen::Index>(names.size()));
  CHECK(alice < bob);
  CHECK(ds.rows(0, alice) == 1.0);
  CHECK(ds.rows(0, bob) == 0.0);
  CHECK(ds.rows(3, alice) == 0.0);
  CHECK(ds.rows(3, bob) == 1.0);

  // slots is the last column (numerics follow the one-hot blocks).
  const Eigen::Index slots_col = static_cast<Eigen::Index>(s.output_dimension) - 1;
  const double sd = std::sqrt(5.0 / 3.0);
  CHECK(ds.rows(0, slots_col) == doctest::Approx((1.0 - 2.5) / sd).epsilon(1e-12));
  CHECK(ds.rows(3, slots_col) == doctest::Approx((4.0 - 2.5) / sd).epsilon(1e-12));

  // Labels come from the exit status.
  CHECK(ds.labels == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("unseen categorical values encode as an all-zero block") {
  RecordSet train;
  train.records.push_back(make_record(1));
  const FeatureSchema s = fit_schema(train, FeatureMode::queue);

  RecordSet test;
  WorkloadRecord r = make_record(2);
  r.owner = "somebody_new";
  test.records.push_back(r);
  const Dataset ds = encode(test, s);

  const auto names = s.feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j].rfind("owner=", 0) == 0) {
      CHECK(ds.rows(0, static_cast<Eigen::Index>(j)) == 0.0);
    }
  }
}

TEST_CASE("constant numeric columns encode as zero") {
  RecordSet train;
  train.records.push_back(make_record(1));
  train.records.push_back(make_record(2));  // identical numerics
  const FeatureSchema s = fit_schema(train, FeatureMode::runtime);
  CHECK(s.numeric_stats.at("slots").stddev == 0.0);
  const Dataset ds = encode(train, s);
  const auto names = s.feature_names();
  const auto slots = static_cast<Eigen::Index>(
      std::find(names.begin(), names.end(), "slots") - names.begin());
  CHECK(ds.rows(0, slots) == 0.0);
  CHECK(ds.rows(1, slots) == 0.0);
}

TEST_CASE("schema JSON round trip preserves the fingerprint") {
  const RecordSet rs = generate_trace(small_generator(61));
  const FeatureSchema s = fit_schema(rs, FeatureMode::runtime, 7200);
  const FeatureSchema back = FeatureSchema::from_json_text(s.to_json_text());
  CHECK(back.mode == s.mode);
  CHECK(back.tz_offset == 7200);
  CHECK(back.categorical_vocab == s.categorical_vocab);
  CHECK(back.numeric_columns == s.numeric_columns);
  CHECK(back.output_dimension == s.output_dimension);
  CHECK(back.fingerprint() == s.fingerprint());

  // Fingerprints are 16 hex digits and sensitive to the vocabulary.
  CHECK(s.fingerprint().size() == 16);
  FeatureSchema mutated = s;
  mutated.categorical_vocab["owner"].push_back("zz_extra");
  CHECK(mutated.fingerprint() != s.fingerprint());

  CHECK_THROWS_AS(FeatureSchema::from_json_text("{}"), std::exception);
  CHECK_THROWS_AS(FeatureSchema::from_json_text("no"), std::exception);
}

TEST_CASE("datasets round-trip through save/load with their sidecar") {
  TempDir tmp("dataset");
  const RecordSet rs = generate_trace(small_generator(62));
  const FeatureSchema s = fit_schema(rs, FeatureMode::queue);
  const Dataset ds = encode(rs, s);

  save_dataset(ds, tmp.file("d.csv"));
  CHECK(std::filesystem::exists(tmp.file("d.csv.meta.json")));
  const Dataset back = load_dataset(tmp.file("d.csv"));
  REQUIRE(back.rows.rows() == ds.rows.rows());
  REQUIRE(back.rows.cols() == ds.rows.cols());
  CHECK((back.rows.array() == ds.rows.array()).all());  // bit-identical round trip
  CHECK(back.labels == ds.labels);
  CHECK(back.row_provenance == ds.row_provenance);
  CHECK(back.schema.fingerprint() == ds.schema.fingerprint());

  // The sidecar carries the schema; without it the dataset cannot be loaded.
  std::filesystem::remove(tmp.file("d.csv.meta.json"));
  CHECK_THROWS_AS(load_dataset(tmp.file("d.csv")), std::exception);
}

TEST_SUITE_END();
