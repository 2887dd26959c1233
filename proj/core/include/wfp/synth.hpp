#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "wfp/trace.hpp"

namespace wfp {

/// Names of the latent failure factors a generated trace plants. Every factor
/// is a deterministic function of observable record fields, so a classifier
/// can recover it.
inline constexpr std::array<std::string_view, 5> kFactorNames = {
    "user_inexperience", "node_vulnerability", "name_bugginess", "offpeak_hour",
    "long_wallclock"};

struct GeneratorConfig {
  int n_users = 48;
  int n_nodes = 467;
  int n_racks = 10;
  int days = 60;
  double jobs_per_day_mean = 1000.0;
  double user_experience_mix = 0.7;  // fraction of experienced users
  double base_failure_logit = -4.35;
  std::map<std::string, double> weights = {
      {"user_inexperience", 2.2},  {"node_vulnerability", 7.0},
      {"name_bugginess", 7.2},     {"offpeak_hour", 0.8},
      {"long_wallclock", 7.0},
  };
  double wallclock_mu = 7.0;     // log-space location of the wallclock draw
  double wallclock_sigma = 1.25;  // log-space scale
  std::int64_t runtime_cap = 172800;
  std::uint64_t seed = 1;

  // Arrival-shape knobs. Peak hours carry most of the volume and, through the
  // experienced-user mix, the lowest failure rates.
  std::int64_t trace_start_epoch = 1596240000;  // 2020-08-01 00:00 UTC
  int peak_hour_start = 8;
  int peak_hour_end = 18;
  double peak_arrival_weight = 3.0;
  double offpeak_arrival_weight = 1.0;
  double weekend_arrival_factor = 0.5;

  void validate() const;
};

struct TraceStats {
  double failure_count_rate = 0.0;
  double failed_cpu_share = 0.0;
  double failed_mem_share = 0.0;
  std::map<std::string, double> per_user_rates;
  std::map<std::string, double> per_node_rates;
  std::array<double, 24> per_hour_rates{};
  std::array<double, 7> per_dow_rates{};
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, TraceStats achieved)
      : std::runtime_error(what), last_achieved(std::move(achieved)) {}
  TraceStats last_achieved;
};

/// Generates a synthetic trace in the canonical schema. Pure function of the
/// config, including the seed.
RecordSet generate_trace(const GeneratorConfig& cfg);

/// Adjusts base_failure_logit and the long_wallclock weight until a trace
/// generated from the config matches the three aggregate targets. Throws
/// CalibrationError (carrying the last achieved stats) after max_iters.
GeneratorConfig calibrate(GeneratorConfig cfg, const TraceStats& targets, int max_iters);

/// Aggregate failure statistics of a filtered, labelable record set.
TraceStats summary_stats(const RecordSet& rs);

GeneratorConfig generator_config_from_json_text(const std::string& text);
std::string generator_config_to_json_text(const GeneratorConfig& cfg);

}  // namespace wfp
