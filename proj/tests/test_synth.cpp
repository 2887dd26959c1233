#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>

#include "wfp/calendar.hpp"
#include "wfp/synth.hpp"
#include "wfp/trace.hpp"

#include "test_util.hpp"

using namespace wfp;
using wfp::test::make_record;
using wfp::test::small_generator;

TEST_SUITE_BEGIN("synth");

TEST_CASE("generation is a pure function of the config") {
  const GeneratorConfig cfg = small_generator(21);
  const RecordSet a = generate_trace(cfg);
  const RecordSet b = generate_trace(cfg);
  CHECK(a.records == b.records);

  GeneratorConfig other = cfg;
  other.seed = 22;
  CHECK(generate_trace(other).records != a.records);
}

TEST_CASE("generated traces satisfy the canonical-record invariants") {
  const GeneratorConfig cfg = small_generator(31, 6, 200.0);
  const RecordSet rs = generate_trace(cfg);
  REQUIRE(rs.records.size() > 400);

  const std::int64_t trace_end = cfg.trace_start_epoch + 86400LL * cfg.days;
  std::set<std::string> owners, hosts;
  std::int64_t failures = 0;
  for (const auto& r : rs.records) {
    CAPTURE(r.job_id);
    CHECK(r.start_time > 0);  // never-started jobs are not synthesized
    CHECK(r.exit_status != kUserKilledExitStatus);
    CHECK(r.submission >= cfg.trace_start_epoch);
    CHECK(r.submission < trace_end);
    CHECK(r.wait_time >= 0);
    CHECK(r.start_time == r.submission + r.wait_time);
    CHECK(r.wallclock >= 1);
    CHECK(r.wallclock <= cfg.runtime_cap);
    CHECK(r.end_time == r.start_time + r.wallclock);
    CHECK(r.slots >= 1);
    CHECK(r.cpu >= 0.0);
    CHECK(r.mem >= 0.0);
    CHECK(r.io >= 0.0);
    CHECK(r.iow >= 0.0);
    CHECK(r.maxvmem > 0.0);
    CHECK_FALSE(r.owner.empty());
    CHECK_FALSE(r.group.empty());
    CHECK_FALSE(r.job_name.empty());
    CHECK_FALSE(r.hostname.empty());
    // Hostnames follow the "<prefix>-<rack>-<chassis>" convention.
    CHECK(std::count(r.hostname.begin(), r.hostname.end(), '-') >= 2);
    owners.insert(r.owner);
    hosts.insert(r.hostname);
    failures += label_record(r).value;
  }
  CHECK(owners.size() == static_cast<std::size_t>(cfg.n_users));
  CHECK(hosts.size() <= static_cast<std::size_t>(cfg.n_nodes));
  CHECK(failures > 0);
  CHECK(failures < static_cast<std::int64_t>(rs.records.size()));

  // Filtering is a no-op: nothing to drop is ever synthesized.
  CHECK(filter_records(rs).records == rs.records);

  // Jobs are emitted in submission order.
  CHECK(std::is_sorted(rs.records.begin(), rs.records.end(),
                       [](const auto& a, const auto& b) { return a.submission < b.submission; }));
}

TEST_CASE("config validation rejects out-of-range knobs") {
  CHECK_THROWS_AS((void)generate_trace([] { auto c = small_generator(1); c.n_users = 0; return c; }()),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)generate_trace([] { auto c = small_generator(1); c.days = 0; return c; }()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (void)generate_trace([] { auto c = small_generator(1); c.jobs_per_day_mean = 0; return c; }()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)generate_trace([] { auto c = small_generator(1); c.user_experience_mix = 1.5; return c; }()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)generate_trace([] { auto c = small_generator(1); c.peak_hour_start = 20; c.peak_hour_end = 8; return c; }()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)generate_trace([] { auto c = small_generator(1); c.weights["no_such_factor"] = 1.0; return c; }()),
      std::invalid_argument);
}

TEST_CASE("summary_stats recomputes the three aggregates by hand") {
  RecordSet rs;
  auto add = [&](std::int64_t id, int exit, double cpu, double mem, const std::string& owner,
                 const std::string& host) {
    WorkloadRecord r = make_record(id, exit);
    r.cpu = cpu;
    r.mem = mem;
    r.owner = owner;
    r.hostname = host;
    rs.records.push_back(r);
  };
  add(1, 1, 100.0, 10.0, "alice", "cpu-1-1");
  add(2, 0, 300.0, 30.0, "alice", "cpu-1-1");
  add(3, 0, 500.0, 50.0, "bob", "cpu-1-2");
  add(4, 0, 100.0, 110.0, "bob", "cpu-1-2");

  const TraceStats s = summary_stats(rs);
  CHECK(s.failure_count_rate == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.failed_cpu_share == doctest::Approx(100.0 / 1000.0).epsilon(1e-12));
  CHECK(s.failed_mem_share == doctest::Approx(10.0 / 200.0).epsilon(1e-12));
  CHECK(s.per_user_rates.at("alice") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.per_user_rates.at("bob") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.per_node_rates.at("cpu-1-1") == doctest::Approx(0.5).epsilon(1e-12));

  const int hour = hour_of_day(rs.records[0].submission, 0);
  const int dow = day_of_week(rs.records[0].submission, 0);
  CHECK(s.per_hour_rates[static_cast<std::size_t>(hour)] ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.per_dow_rates[static_cast<std::size_t>(dow)] ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("generated failure statistics are in a plausible band") {
  const RecordSet rs = generate_trace(small_generator(41, 8, 300.0));
  const TraceStats s = summary_stats(rs);
  CHECK(s.failure_count_rate > 0.01);
  CHECK(s.failure_count_rate < 0.5);
  CHECK(s.failed_cpu_share > 0.0);
  CHECK(s.failed_cpu_share < 1.0);
  CHECK(s.failed_mem_share > 0.0);
  CHECK(s.failed_mem_share < 1.0);
}

TEST_CASE("generator config survives a JSON round trip") {
  GeneratorConfig cfg = small_generator(77, 9, 123.5);
  cfg.base_failure_logit = -3.875;
  cfg.weights["long_wallclock"] = 6.25;
  cfg.wallclock_mu = 6.5;
  cfg.user_experience_mix = 0.625;
  cfg.peak_arrival_weight = 2.5;
  cfg.weekend_arrival_factor = 0.75;

  const GeneratorConfig back = generator_config_from_json_text(generator_config_to_json_text(cfg));
  CHECK(back.n_users == cfg.n_users);
  CHECK(back.n_nodes == cfg.n_nodes);
  CHECK(back.n_racks == cfg.n_racks);
  CHECK(back.days == cfg.days);
  CHECK(back.jobs_per_day_mean == cfg.jobs_per_day_mean);
  CHECK(back.user_experience_mix == cfg.user_experience_mix);
  CHECK(back.base_failure_logit == cfg.base_failure_logit);
  CHECK(back.weights == cfg.weights);
  CHECK(back.wallclock_mu == cfg.wallclock_mu);
  CHECK(back.wallclock_sigma == cfg.wallclock_sigma);
  CHECK(back.runtime_cap == cfg.runtime_cap);
  CHECK(back.seed == cfg.seed);
  CHECK(back.trace_start_epoch == cfg.trace_start_epoch);
  CHECK(back.peak_hour_start == cfg.peak_hour_start);
  CHECK(back.peak_hour_end == cfg.peak_hour_end);
  CHECK(back.peak_arrival_weight == cfg.peak_arrival_weight);
  CHECK(back.offpeak_arrival_weight == cfg.offpeak_arrival_weight);
  CHECK(back.weekend_arrival_factor == cfg.weekend_arrival_factor);

  // Round-tripped configs generate identical traces.
  CHECK(generate_trace(back).records == generate_trace(cfg).records);
}

TEST_CASE("generator config JSON rejects unknown keys") {
  CHECK_THROWS_AS(generator_config_from_json_text(R"({"n_users": 4, "bogus": 1})"),
                  std::exception);
  CHECK_THROWS_AS(generator_config_from_json_text("not json"), std::exception);
}

TEST_CASE("calibrate reports the last achieved stats when it cannot converge") {
  GeneratorConfig cfg = small_generator(5, 10, 400.0);
  TraceStats targets;
  targets.failure_count_rate = 0.9;  // unreachable without saturating the logit
  targets.failed_cpu_share = 0.95;
  targets.failed_mem_share = 0.95;
  try {
    calibrate(cfg, targets, 2);
    FAIL("calibrate should have thrown");
  } catch (const CalibrationError& e) {
    CHECK(e.last_achieved.failure_count_rate > 0.0);
    CHECK(std::string(e.what()).find("calibrat") != std::string::npos);
  }
}

TEST_SUITE_END();
