#include "pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "reports.hpp"
#include "wfp/features.hpp"
#include "wfp/numeric.hpp"
#include "wfp/rng.hpp"
#include "wfp/trace.hpp"

namespace wfp::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const char* where,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, unused] : j.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument(std::string("run config: unknown key '") + key +
                                  "' in " + where);
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void log(const std::string& msg) { std::fprintf(stderr, "[wfp] %s\n", msg.c_str()); }

}  // namespace

RunConfig run_config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("run config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("run config: expected a JSON object");
  reject_unknown(j, "the top level",
                 {"seed", "paths", "generator", "model", "tz_offset",
                  "name_similarity_threshold", "holdout", "checkpoint_grid", "sweep_days",
                  "rw_mode", "kill_policy", "wallclock_bin_width", "node_cores", "charts"});

  RunConfig c;
  c.seed = j.value("seed", c.seed);

  if (!j.contains("paths") || !j.at("paths").is_object()) {
    throw std::invalid_argument("run config: missing 'paths' object");
  }
  const json& paths = j.at("paths");
  reject_unknown(paths, "paths", {"outdir", "trace"});
  if (!paths.contains("outdir")) {
    throw std::invalid_argument("run config: paths.outdir is required");
  }
  c.outdir = paths.at("outdir").get<std::string>();
  if (paths.contains("trace")) c.trace = paths.at("trace").get<std::string>();

  if (j.contains("generator")) {
    c.generator = generator_config_from_json_text(j.at("generator").dump());
    c.generator_has_seed = j.at("generator").contains("seed");
  }
  if (j.contains("model")) c.model = model_spec_from_json_text(j.at("model").dump());
  c.tz_offset = j.value("tz_offset", c.tz_offset);
  c.name_similarity_threshold =
      j.value("name_similarity_threshold", c.name_similarity_threshold);

  if (j.contains("holdout")) {
    const json& h = j.at("holdout");
    reject_unknown(h, "holdout", {"train", "validation", "test"});
    c.holdout.train = h.value("train", c.holdout.train);
    c.holdout.validation = h.value("validation", c.holdout.validation);
    c.holdout.test = h.value("test", c.holdout.test);
  }

  if (j.contains("checkpoint_grid")) {
    const json& g = j.at("checkpoint_grid");
    reject_unknown(g, "checkpoint_grid", {"start", "end", "step"});
    const auto start = g.value("start", std::int64_t{600});
    const auto end = g.value("end", std::int64_t{21600});
    const auto step = g.value("step", std::int64_t{600});
    if (start < 1 || step < 1 || end < start) {
      throw std::invalid_argument("run config: bad checkpoint_grid");
    }
    for (std::int64_t t = start; t <= end; t += step) c.checkpoint_grid.push_back(t);
  } else {
    for (std::int64_t t = 600; t <= 21600; t += 600) c.checkpoint_grid.push_back(t);
  }

  if (j.contains("sweep_days")) {
    c.sweep_days = j.at("sweep_days").get<std::vector<int>>();
  }

  const std::string rw = j.value("rw_mode", std::string("consumed"));
  if (rw == "consumed") {
    c.rw_mode = RwMode::consumed;
  } else if (rw == "full") {
    c.rw_mode = RwMode::full;
  } else {
    throw std::invalid_argument("run config: rw_mode must be consumed|full");
  }
  const std::string policy = j.value("kill_policy", std::string("absorbing"));
  if (policy == "absorbing") {
    c.kill_policy = KillPolicy::absorbing;
  } else if (policy == "snapshots") {
    c.kill_policy = KillPolicy::snapshots;
  } else {
    throw std::invalid_argument("run config: kill_policy must be absorbing|snapshots");
  }

  c.wallclock_bin_width = j.value("wallclock_bin_width", c.wallclock_bin_width);
  c.node_cores = j.value("node_cores", c.node_cores);
  c.charts = j.value("charts", c.charts);

  if (c.wallclock_bin_width < 1) {
    throw std::invalid_argument("run config: wallclock_bin_width must be >= 1");
  }
  if (c.node_cores < 1) throw std::invalid_argument("run config: node_cores must be >= 1");
  if (!(c.name_similarity_threshold > 0.0) || c.name_similarity_threshold > 1.0) {
    throw std::invalid_argument("run config: name_similarity_threshold must be in (0,1]");
  }
  c.generator.validate();
  c.model.validate();
  return c;
}

void run_pipeline(const std::filesystem::path& config_path) {
  const std::string text = read_file(config_path);
  const RunConfig cfg = run_config_from_json_text(text);
  // Hash the parsed document (sorted keys), not the raw bytes, so formatting
  // differences in equivalent configs hash alike.
  const std::uint64_t config_hash = fnv1a64(json::parse(text).dump());

  std::filesystem::create_directories(cfg.outdir);

  // Stage 1: obtain the trace.
  RecordSet raw;
  if (!cfg.trace.empty()) {
    std::size_t skipped = 0;
    raw = load_trace(cfg.trace, {}, &skipped);
    log("loaded " + std::to_string(raw.records.size()) + " records from " +
        cfg.trace.string() + (skipped ? " (skipped " + std::to_string(skipped) + ")" : ""));
  } else {
    // A generator block with an explicit seed reproduces exactly the trace it
    // was calibrated on; otherwise the trace seed flows from the run seed.
    GeneratorConfig gen = cfg.generator;
    if (!cfg.generator_has_seed) gen.seed = derive_seed(cfg.seed, "stage:generate");
    raw = generate_trace(gen);
    save_trace(raw, cfg.outdir / "trace.csv", false);
    write_sidecar(cfg.outdir / "trace.csv", config_hash, cfg.seed);
    log("generated " + std::to_string(raw.records.size()) + " records");
  }

  // Stage 2: filter and label.
  const RecordSet filtered = filter_records(raw);
  save_trace(filtered, cfg.outdir / "ingested.csv", true);
  write_sidecar(cfg.outdir / "ingested.csv", config_hash, cfg.seed);
  log("filtered to " + std::to_string(filtered.records.size()) + " records");
  if (filtered.records.empty()) throw std::runtime_error("pipeline: no records survive filtering");

  // Stage 3: characterization reports.
  const CharacterizationReport characterization =
      characterize(filtered, cfg.wallclock_bin_width, cfg.tz_offset);
  write_characterization_reports(characterization, cfg.outdir / "characterize", cfg.charts,
                                 config_hash, cfg.seed);
  log("characterized: failure rate " +
      fmt(static_cast<double>(characterization.total_failures) /
          static_cast<double>(characterization.total)));

  // Stage 4: name normalization and the holdout split.
  const RecordSet normalized =
      normalize_job_names(filtered, cfg.name_similarity_threshold);
  const RecordSplit split =
      split_records(normalized, cfg.holdout, derive_seed(cfg.seed, "stage:split"));
  log("split " + std::to_string(split.train.records.size()) + "/" +
      std::to_string(split.validation.records.size()) + "/" +
      std::to_string(split.test.records.size()) + " train/validation/test");

  // Stage 5: per-mode featurize, train, evaluate.
  std::vector<std::vector<std::string>> eval_rows;
  TrainedModel runtime_model;
  FeatureSchema runtime_schema;
  for (const FeatureMode mode : {FeatureMode::queue, FeatureMode::runtime}) {
    const std::string mode_name = to_string(mode);
    const FeatureSchema schema = fit_schema(split.train, mode, cfg.tz_offset);
    {
      const auto path = cfg.outdir / ("schema_" + mode_name + ".json");
      std::ofstream out(path, std::ios::binary);
      out << schema.to_json_text();
      if (!out) throw std::runtime_error("cannot write " + path.string());
      write_sidecar(path, config_hash, cfg.seed);
    }
    const Dataset train_ds = encode(split.train, schema);
    const Dataset val_ds = encode(split.validation, schema);
    const Dataset test_ds = encode(split.test, schema);

    ModelSpec spec = cfg.model;
    spec.seed = derive_seed(cfg.seed, "stage:train:" + mode_name);
    const TrainedModel model = train(spec, train_ds);
    log(mode_name + " " + to_string(spec.kind) + " trained in " +
        fmt(model.train_seconds) + " s on " + std::to_string(train_ds.size()) + " rows");
    if (const auto* lin = std::get_if<LinearParams>(&model.params);
        lin && spec.kind == ModelKind::lr && !lin->converged) {
      log("warning: lr did not converge; final gradient norm " +
          fmt(lin->final_grad_norm));
    }
    save_model(model, cfg.outdir / ("model_" + mode_name + ".json"));
    write_sidecar(cfg.outdir / ("model_" + mode_name + ".json"), config_hash, cfg.seed);

    const EvalResult val_res = evaluate(model, val_ds);
    log(mode_name + " validation: recall " + fmt(val_res.scores.recall) + ", precision " +
        fmt(val_res.scores.precision) + ", f1 " + fmt(val_res.scores.f1));
    const EvalResult res = evaluate(model, test_ds);
    log(mode_name + " test: recall " + fmt(res.scores.recall) + ", precision " +
        fmt(res.scores.precision) + ", f1 " + fmt(res.scores.f1));
    eval_rows.push_back({mode_name, to_string(spec.kind),
                         std::to_string(test_ds.size()), std::to_string(res.counts.tp),
                         std::to_string(res.counts.fp), std::to_string(res.counts.tn),
                         std::to_string(res.counts.fn), fmt(res.scores.recall),
                         fmt(res.scores.precision), fmt(res.scores.f1)});

    if (mode == FeatureMode::runtime) {
      runtime_model = model;
      runtime_schema = schema;
    }
  }
  write_csv(cfg.outdir / "evaluation.csv",
            {"mode", "model", "test_rows", "tp", "fp", "tn", "fn", "recall", "precision",
             "f1"},
            eval_rows);
  write_sidecar(cfg.outdir / "evaluation.csv", config_hash, cfg.seed);

  // Stage 6: proactive-kill simulation on the held-out records.
  const SavingsCurve curve =
      savings_curve(runtime_model, split.test, runtime_schema, cfg.checkpoint_grid,
                    cfg.rw_mode, cfg.kill_policy, cfg.node_cores);
  write_savings_report(curve, cfg.outdir / "savings.csv", config_hash, cfg.seed);
  if (cfg.charts) {
    write_savings_chart(curve, cfg.outdir / "savings.svg");
    write_sidecar(cfg.outdir / "savings.svg", config_hash, cfg.seed);
  }
  log("savings at t=" + std::to_string(curve.points.front().t) + ": cpu " +
      fmt(curve.points.front().r_saving_cpu) + ", mem " +
      fmt(curve.points.front().r_saving_mem));

  // Stage 7 (optional): training-size sweep.
  if (!cfg.sweep_days.empty()) {
    ModelSpec spec = cfg.model;
    spec.seed = derive_seed(cfg.seed, "stage:sweep");
    const SweepReport sweep =
        sweep_training_size(normalized, cfg.sweep_days, FeatureMode::runtime, spec,
                            cfg.holdout.test, cfg.tz_offset, cfg.name_similarity_threshold);
    write_sweep_report(sweep, cfg.outdir / "sweep.csv", config_hash, cfg.seed);
    log("sweep: " + std::to_string(sweep.rows.size()) + " grid points");
  }
}

}  // namespace wfp::cli
