#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wfp/eval.hpp"
#include "wfp/model.hpp"
#include "wfp/remediate.hpp"
#include "wfp/synth.hpp"

namespace wfp::cli {

/// Whole-run configuration, parsed from a JSON document with unknown keys
/// rejected at every level. One seed drives every stage through derived
/// sub-seeds, so a config file pins the entire pipeline output.
struct RunConfig {
  std::uint64_t seed = 1;
  std::filesystem::path outdir;
  std::filesystem::path trace;  // empty: generate from `generator`
  GeneratorConfig generator;
  bool generator_has_seed = false;  // config block carried an explicit seed
  ModelSpec model;
  std::int64_t tz_offset = 0;
  double name_similarity_threshold = 0.8;
  HoldoutFractions holdout;
  std::vector<std::int64_t> checkpoint_grid;  // default 600..21600 step 600
  std::vector<int> sweep_days;                // empty: skip the sweep stage
  RwMode rw_mode = RwMode::consumed;
  KillPolicy kill_policy = KillPolicy::absorbing;
  std::int64_t wallclock_bin_width = 6000;
  int node_cores = 36;
  bool charts = true;
};

RunConfig run_config_from_json_text(const std::string& text);

/// Executes generate/ingest -> characterize -> split -> featurize -> train ->
/// evaluate -> simulate-kill, writing every report under config.outdir.
void run_pipeline(const std::filesystem::path& config_path);

}  // namespace wfp::cli
