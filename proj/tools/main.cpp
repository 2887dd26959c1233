#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "pipeline.hpp"
#include "reports.hpp"
#include "wfp/chart.hpp"
#include "wfp/eval.hpp"
#include "wfp/features.hpp"
#include "wfp/model.hpp"
#include "wfp/numeric.hpp"
#include "wfp/remediate.hpp"
#include "wfp/rng.hpp"
#include "wfp/synth.hpp"
#include "wfp/trace.hpp"

namespace {

using nlohmann::json;
using namespace wfp;
using namespace wfp::cli;

void log(const std::string& msg) { std::fprintf(stderr, "[wfp] %s\n", msg.c_str()); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("short write: " + path);
}

/// Stable hash of a command's effective parameters for the report sidecars.
std::uint64_t args_hash(const json& effective) { return fnv1a64(effective.dump()); }

/// "600:21600:600" -> {600, 1200, ..., 21600}.
std::vector<std::int64_t> parse_time_grid(const std::string& s) {
  std::int64_t start = 0, end = 0, step = 0;
  if (std::sscanf(s.c_str(), "%ld:%ld:%ld", &start, &end, &step) != 3 || start < 1 ||
      step < 1 || end < start) {
    throw std::invalid_argument("bad --grid '" + s + "', expected start:end:step");
  }
  std::vector<std::int64_t> grid;
  for (std::int64_t t = start; t <= end; t += step) grid.push_back(t);
  return grid;
}

/// Day grids accept "1..60", "1..60:5" and comma lists like "1,5,10,30".
std::vector<int> parse_day_grid(const std::string& s) {
  std::vector<int> days;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto dots = tok.find("..");
    if (dots != std::string::npos) {
      int lo = 0, hi = 0, step = 1;
      const std::string rest = tok.substr(dots + 2);
      const auto colon = rest.find(':');
      lo = std::stoi(tok.substr(0, dots));
      hi = std::stoi(colon == std::string::npos ? rest : rest.substr(0, colon));
      if (colon != std::string::npos) step = std::stoi(rest.substr(colon + 1));
      if (lo < 1 || hi < lo || step < 1) {
        throw std::invalid_argument("bad --days range '" + tok + "'");
      }
      for (int d = lo; d <= hi; d += step) days.push_back(d);
    } else {
      days.push_back(std::stoi(tok));
    }
  }
  if (days.empty()) throw std::invalid_argument("empty --days grid");
  std::sort(days.begin(), days.end());
  days.erase(std::unique(days.begin(), days.end()), days.end());
  if (days.front() < 1) throw std::invalid_argument("--days entries must be >= 1");
  return days;
}

/// Loads a trace for model-facing commands: filter, plus drop the rare
/// zero-wallclock rows that derived features cannot represent.
RecordSet load_model_input(const std::string& path) {
  std::size_t skipped = 0;
  RecordSet rs = load_trace(path, {}, &skipped);
  if (skipped) log("skipped " + std::to_string(skipped) + " malformed rows");
  const std::size_t before = rs.records.size();
  rs = filter_records(rs);
  std::size_t degenerate = 0;
  RecordSet out;
  out.provenance = rs.provenance;
  for (auto& r : rs.records) {
    if (r.wallclock > 0 && r.slots > 0) {
      out.records.push_back(std::move(r));
    } else {
      ++degenerate;
    }
  }
  if (before != rs.records.size() || degenerate) {
    log("dropped " + std::to_string(before - rs.records.size()) + " filtered and " +
        std::to_string(degenerate) + " degenerate records");
  }
  return out;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string input, output;
  std::int64_t from = 0, to = 0;
  bool has_from = false, has_to = false;
};

void cmd_ingest(const IngestArgs& a) {
  std::optional<std::pair<std::int64_t, std::int64_t>> window;
  if (a.has_from || a.has_to) {
    window = {a.has_from ? a.from : std::numeric_limits<std::int64_t>::min(),
              a.has_to ? a.to : std::numeric_limits<std::int64_t>::max()};
  }
  std::size_t skipped = 0;
  const RecordSet raw = load_trace(a.input, window, &skipped);
  const RecordSet filtered = filter_records(raw);
  save_trace(filtered, a.output, true);
  write_sidecar(a.output,
                args_hash(json{{"command", "ingest"},
                               {"input", a.input},
                               {"from", a.has_from ? json(a.from) : json()},
                               {"to", a.has_to ? json(a.to) : json()},
                               {"output", a.output}}),
                0);
  std::int64_t failures = 0;
  for (const auto& r : filtered.records) failures += label_record(r).value;
  std::printf("ingested %zu records (skipped %zu malformed, filtered %zu), failures %lld\n",
              filtered.records.size(), skipped, raw.records.size() - filtered.records.size(),
              static_cast<long long>(failures));
}

struct GenerateArgs {
  std::string config, output;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

void cmd_generate(const GenerateArgs& a) {
  GeneratorConfig cfg;
  if (!a.config.empty()) cfg = generator_config_from_json_text(read_file(a.config));
  if (a.has_seed) cfg.seed = a.seed;
  const RecordSet rs = generate_trace(cfg);
  save_trace(rs, a.output, false);
  write_sidecar(a.output,
                args_hash(json::parse(generator_config_to_json_text(cfg))), cfg.seed);
  const TraceStats stats = summary_stats(filter_records(rs));
  std::printf("generated %zu records: failure rate %s, failed cpu share %s, "
              "failed mem share %s\n",
              rs.records.size(), fmt(stats.failure_count_rate).c_str(),
              fmt(stats.failed_cpu_share).c_str(), fmt(stats.failed_mem_share).c_str());
}

struct CalibrateArgs {
  std::string config, targets = "0.085,0.211,0.202", output;
  int max_iters = 40;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

void cmd_calibrate(const CalibrateArgs& a) {
  GeneratorConfig cfg;
  if (!a.config.empty()) cfg = generator_config_from_json_text(read_file(a.config));
  if (a.has_seed) cfg.seed = a.seed;
  TraceStats targets;
  if (std::sscanf(a.targets.c_str(), "%lf,%lf,%lf", &targets.failure_count_rate,
                  &targets.failed_cpu_share, &targets.failed_mem_share) != 3) {
    throw std::invalid_argument("bad --targets '" + a.targets +
                                "', expected rate,cpu_share,mem_share");
  }
  const GeneratorConfig calibrated = calibrate(cfg, targets, a.max_iters);
  write_file(a.output, generator_config_to_json_text(calibrated));
  write_sidecar(a.output,
                args_hash(json{{"command", "calibrate"},
                               {"targets", a.targets},
                               {"config", a.config}}),
                calibrated.seed);
  std::printf("calibrated config written to %s (base_failure_logit %s, "
              "long_wallclock weight %s)\n",
              a.output.c_str(), fmt(calibrated.base_failure_logit).c_str(),
              fmt(calibrated.weights.at("long_wallclock")).c_str());
}

struct FeaturizeArgs {
  std::string input, mode = "queue", schema_out, schema_in, output;
  std::int64_t tz_offset = 0;
  double name_threshold = 0.8;
  bool no_normalize = false;
};

void cmd_featurize(const FeaturizeArgs& a) {
  RecordSet rs = load_model_input(a.input);
  if (rs.records.empty()) throw std::runtime_error("featurize: no usable records");
  if (!a.no_normalize) rs = normalize_job_names(rs, a.name_threshold);

  FeatureSchema schema;
  if (!a.schema_in.empty()) {
    schema = FeatureSchema::from_json_text(read_file(a.schema_in));
    if (to_string(schema.mode) != a.mode) {
      throw std::runtime_error("featurize: --mode " + a.mode + " but schema is " +
                               to_string(schema.mode) + " mode");
    }
  } else {
    if (a.schema_out.empty()) {
      throw std::invalid_argument("featurize: --schema-out is required when fitting");
    }
    schema = fit_schema(rs, feature_mode_from_string(a.mode), a.tz_offset);
  }

  const Dataset ds = encode(rs, schema);
  if (!a.schema_out.empty()) {
    write_file(a.schema_out, schema.to_json_text());
  }
  save_dataset(ds, a.output);
  const std::uint64_t hash = args_hash(json{{"command", "featurize"},
                                            {"input", a.input},
                                            {"mode", a.mode},
                                            {"schema_in", a.schema_in},
                                            {"tz_offset", a.tz_offset},
                                            {"normalize", !a.no_normalize},
                                            {"name_threshold", a.name_threshold}});
  write_sidecar(a.output, hash, 0);
  if (!a.schema_out.empty()) write_sidecar(a.schema_out, hash, 0);
  std::printf("encoded %lld rows x %zu features (schema %s)\n",
              static_cast<long long>(ds.size()), ds.schema.output_dimension,
              ds.schema.fingerprint().c_str());
}

struct TrainArgs {
  std::string data, schema, model = "rf", output;
  std::uint64_t seed = 1;
  int trees = 100;
  double lr_c = 0.1;
  int min_leaf = 1;
  int max_depth = 0;
  bool no_bootstrap = false;
  bool all_features = false;
};

void cmd_train(const TrainArgs& a) {
  const Dataset ds = load_dataset(a.data);
  const FeatureSchema schema = FeatureSchema::from_json_text(read_file(a.schema));
  if (schema.fingerprint() != ds.schema.fingerprint()) {
    throw std::runtime_error("train: --schema does not match the dataset's schema (" +
                             schema.fingerprint() + " vs " + ds.schema.fingerprint() + ")");
  }
  ModelSpec spec;
  spec.kind = model_kind_from_string(a.model);
  spec.seed = a.seed;
  spec.rf_n_trees = a.trees;
  spec.lr_c = a.lr_c;
  spec.dt_min_leaf = a.min_leaf;
  spec.dt_max_depth = a.max_depth;
  spec.rf_bootstrap = !a.no_bootstrap;
  spec.rf_sqrt_features = !a.all_features;

  const TrainedModel model = train(spec, ds);
  if (const auto* lin = std::get_if<LinearParams>(&model.params);
      lin && spec.kind == ModelKind::lr && !lin->converged) {
    log("warning: lr did not converge in " + std::to_string(spec.lr_max_iters) +
        " iterations; final gradient norm " + fmt(lin->final_grad_norm));
  }
  save_model(model, a.output);
  write_sidecar(a.output, args_hash(json::parse(model_spec_to_json_text(spec))), a.seed);
  std::printf("trained %s on %lld rows in %.3f s -> %s\n", a.model.c_str(),
              static_cast<long long>(ds.size()), model.train_seconds, a.output.c_str());
}

struct EvaluateArgs {
  std::string model, data, predictions_out, report;
};

void cmd_evaluate(const EvaluateArgs& a) {
  const TrainedModel model = load_model(a.model);
  const Dataset ds = load_dataset(a.data);
  std::vector<Prediction> preds;
  const EvalResult res = evaluate(model, ds, &preds);

  const std::uint64_t hash = args_hash(
      json{{"command", "evaluate"}, {"model", a.model}, {"data", a.data}});
  if (!a.predictions_out.empty()) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      rows.push_back({std::to_string(i), std::to_string(ds.labels[i]),
                      std::to_string(preds[i].label), fmt(preds[i].score)});
    }
    write_csv(a.predictions_out, {"row", "label", "predicted", "score"}, rows);
    write_sidecar(a.predictions_out, hash, 0);
  }
  if (!a.report.empty()) {
    write_csv(a.report,
              {"model", "rows", "tp", "fp", "tn", "fn", "recall", "precision", "f1"},
              {{to_string(model.spec.kind), std::to_string(ds.size()),
                std::to_string(res.counts.tp), std::to_string(res.counts.fp),
                std::to_string(res.counts.tn), std::to_string(res.counts.fn),
                fmt(res.scores.recall), fmt(res.scores.precision), fmt(res.scores.f1)}});
    write_sidecar(a.report, hash, 0);
  }
  std::printf("rows=%lld tp=%lld fp=%lld tn=%lld fn=%lld recall=%s precision=%s f1=%s\n",
              static_cast<long long>(ds.size()), static_cast<long long>(res.counts.tp),
              static_cast<long long>(res.counts.fp), static_cast<long long>(res.counts.tn),
              static_cast<long long>(res.counts.fn), fmt(res.scores.recall).c_str(),
              fmt(res.scores.precision).c_str(), fmt(res.scores.f1).c_str());
}

struct SweepArgs {
  std::string data, days = "1..60", model = "rf", mode = "runtime", report;
  std::uint64_t seed = 1;
  int trees = 100;
  double test_fraction = 0.20;
  std::int64_t tz_offset = 0;
  double name_threshold = 0.8;
};

void cmd_sweep(const SweepArgs& a) {
  const RecordSet rs = load_model_input(a.data);
  ModelSpec spec;
  spec.kind = model_kind_from_string(a.model);
  spec.seed = a.seed;
  spec.rf_n_trees = a.trees;
  const SweepReport rep =
      sweep_training_size(rs, parse_day_grid(a.days), feature_mode_from_string(a.mode),
                          spec, a.test_fraction, a.tz_offset, a.name_threshold);
  write_sweep_report(rep, a.report,
                     args_hash(json{{"command", "sweep"},
                                    {"data", a.data},
                                    {"days", a.days},
                                    {"model", a.model},
                                    {"mode", a.mode}}),
                     a.seed);
  for (const SweepRow& row : rep.rows) {
    std::printf("days=%d train_rows=%lld f1=%s time=%.3fs\n", row.days,
                static_cast<long long>(row.train_rows), fmt(row.scores.f1).c_str(),
                row.scores.training_time);
  }
}

struct CharacterizeArgs {
  std::string input, outdir;
  bool svg = false;
  std::int64_t bin_width = 6000;
  std::int64_t tz_offset = 0;
};

void cmd_characterize(const CharacterizeArgs& a) {
  std::size_t skipped = 0;
  const RecordSet raw = load_trace(a.input, {}, &skipped);
  if (skipped) log("skipped " + std::to_string(skipped) + " malformed rows");
  const RecordSet filtered = filter_records(raw);
  if (filtered.records.empty()) throw std::runtime_error("characterize: no records");
  const CharacterizationReport rep = characterize(filtered, a.bin_width, a.tz_offset);
  write_characterization_reports(rep, a.outdir, a.svg,
                                 args_hash(json{{"command", "characterize"},
                                                {"input", a.input},
                                                {"bin_width", a.bin_width},
                                                {"tz_offset", a.tz_offset}}),
                                 0);
  std::printf("characterized %lld records, %lld failures (rate %s) -> %s\n",
              static_cast<long long>(rep.total), static_cast<long long>(rep.total_failures),
              fmt(static_cast<double>(rep.total_failures) / static_cast<double>(rep.total))
                  .c_str(),
              a.outdir.c_str());
}

struct SimulateArgs {
  std::string model, schema, test, grid = "600:21600:600", rw_mode = "consumed", report,
              svg;
  bool snapshots = false;
  int node_cores = 36;
};

void cmd_simulate_kill(const SimulateArgs& a) {
  const TrainedModel model = load_model(a.model);
  const FeatureSchema schema = FeatureSchema::from_json_text(read_file(a.schema));
  const RecordSet test = load_model_input(a.test);
  if (test.records.empty()) throw std::runtime_error("simulate-kill: empty test set");

  RwMode rw;
  if (a.rw_mode == "consumed") {
    rw = RwMode::consumed;
  } else if (a.rw_mode == "full") {
    rw = RwMode::full;
  } else {
    throw std::invalid_argument("--rw-mode must be consumed|full");
  }
  const KillPolicy policy = a.snapshots ? KillPolicy::snapshots : KillPolicy::absorbing;
  const SavingsCurve curve = savings_curve(model, test, schema, parse_time_grid(a.grid),
                                           rw, policy, a.node_cores);
  const std::uint64_t hash = args_hash(json{{"command", "simulate-kill"},
                                            {"model", a.model},
                                            {"schema", a.schema},
                                            {"test", a.test},
                                            {"grid", a.grid},
                                            {"rw_mode", a.rw_mode},
                                            {"policy", a.snapshots ? "snapshots" : "absorbing"},
                                            {"node_cores", a.node_cores}});
  write_savings_report(curve, a.report, hash, 0);
  if (!a.svg.empty()) {
    write_savings_chart(curve, a.svg);
    write_sidecar(a.svg, hash, 0);
  }
  const SavingsPoint& first = curve.points.front();
  std::printf("t=%lld: r_saving_cpu=%s r_saving_mem=%s node_days_saved=%s n_running=%lld\n",
              static_cast<long long>(first.t), fmt(first.r_saving_cpu).c_str(),
              fmt(first.r_saving_mem).c_str(),
              fmt(node_days(first.r_s_cpu - first.r_w_cpu, a.node_cores)).c_str(),
              static_cast<long long>(first.n_running));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workload failure prediction toolkit"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "filter and label an accounting trace");
  ingest->add_option("--input", ingest_args.input, "canonical accounting CSV")->required();
  auto* from_opt = ingest->add_option("--from", ingest_args.from,
                                      "keep submissions at or after this epoch second");
  auto* to_opt =
      ingest->add_option("--to", ingest_args.to, "keep submissions before this epoch second");
  ingest->add_option("--output", ingest_args.output, "labeled CSV to write")->required();

  GenerateArgs generate_args;
  auto* generate = app.add_subcommand("generate", "emit a synthetic accounting trace");
  generate->add_option("--config", generate_args.config, "generator config JSON");
  generate->add_option("--output", generate_args.output, "trace CSV to write")->required();
  auto* gen_seed = generate->add_option("--seed", generate_args.seed, "override the config seed");

  CalibrateArgs calibrate_args;
  auto* calibrate_cmd =
      app.add_subcommand("calibrate", "fit generator knobs to target failure statistics");
  calibrate_cmd->add_option("--config", calibrate_args.config, "starting generator config");
  calibrate_cmd->add_option("--targets", calibrate_args.targets,
                            "failure_rate,cpu_share,mem_share");
  calibrate_cmd->add_option("--output", calibrate_args.output, "calibrated config JSON")
      ->required();
  calibrate_cmd->add_option("--max-iters", calibrate_args.max_iters, "iteration cap");
  auto* cal_seed =
      calibrate_cmd->add_option("--seed", calibrate_args.seed, "override the config seed");

  FeaturizeArgs featurize_args;
  auto* featurize = app.add_subcommand("featurize", "encode a trace into a model dataset");
  featurize->add_option("--input", featurize_args.input, "labeled trace CSV")->required();
  featurize->add_option("--mode", featurize_args.mode, "queue|runtime");
  featurize->add_option("--schema-out", featurize_args.schema_out, "schema JSON to write");
  featurize->add_option("--schema-in", featurize_args.schema_in,
                        "encode against an existing schema");
  featurize->add_option("--output", featurize_args.output, "dataset CSV to write")->required();
  featurize->add_option("--tz-offset", featurize_args.tz_offset, "seconds added before hour/day");
  featurize->add_option("--name-threshold", featurize_args.name_threshold,
                        "job-name clustering similarity threshold");
  featurize->add_flag("--no-normalize-names", featurize_args.no_normalize,
                      "skip job-name normalization");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "fit a classifier on an encoded dataset");
  train_cmd->add_option("--data", train_args.data, "dataset CSV from featurize")->required();
  train_cmd->add_option("--schema", train_args.schema, "schema JSON from featurize")->required();
  train_cmd->add_option("--model", train_args.model, "gnb|lr|lda|dt|rf");
  train_cmd->add_option("--seed", train_args.seed, "training seed");
  train_cmd->add_option("--trees", train_args.trees, "forest size");
  train_cmd->add_option("--lr-c", train_args.lr_c, "inverse regularization strength");
  train_cmd->add_option("--min-leaf", train_args.min_leaf, "minimum samples per leaf");
  train_cmd->add_option("--max-depth", train_args.max_depth, "tree depth cap, 0 = none");
  train_cmd->add_flag("--no-bootstrap", train_args.no_bootstrap,
                      "train forest trees on the full sample");
  train_cmd->add_flag("--all-features", train_args.all_features,
                      "consider every feature at each split");
  train_cmd->add_option("--output", train_args.output, "model JSON to write")->required();

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score a model on an encoded dataset");
  evaluate_cmd->add_option("--model", evaluate_args.model, "model JSON")->required();
  evaluate_cmd->add_option("--data", evaluate_args.data, "dataset CSV")->required();
  evaluate_cmd->add_option("--predictions-out", evaluate_args.predictions_out,
                           "per-row prediction CSV");
  evaluate_cmd->add_option("--report", evaluate_args.report, "metrics CSV");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "metrics vs training-window size");
  sweep_cmd->add_option("--data", sweep_args.data, "labeled trace CSV")->required();
  sweep_cmd->add_option("--days", sweep_args.days, "grid, e.g. 1..60, 1..60:5 or 1,5,30");
  sweep_cmd->add_option("--model", sweep_args.model, "gnb|lr|lda|dt|rf");
  sweep_cmd->add_option("--mode", sweep_args.mode, "queue|runtime");
  sweep_cmd->add_option("--seed", sweep_args.seed, "training seed");
  sweep_cmd->add_option("--trees", sweep_args.trees, "forest size");
  sweep_cmd->add_option("--test-fraction", sweep_args.test_fraction,
                        "final time window held out for scoring");
  sweep_cmd->add_option("--tz-offset", sweep_args.tz_offset, "seconds added before hour/day");
  sweep_cmd->add_option("--report", sweep_args.report, "sweep CSV to write")->required();

  CharacterizeArgs characterize_args;
  auto* characterize_cmd =
      app.add_subcommand("characterize", "failure breakdowns by node, user and time");
  characterize_cmd->add_option("--input", characterize_args.input, "trace CSV")->required();
  characterize_cmd->add_option("--outdir", characterize_args.outdir, "report directory")
      ->required();
  characterize_cmd->add_flag("--svg", characterize_args.svg, "also render charts");
  characterize_cmd->add_option("--bin-width", characterize_args.bin_width,
                               "wallclock bin width, seconds");
  characterize_cmd->add_option("--tz-offset", characterize_args.tz_offset,
                               "seconds added before hour/day");

  SimulateArgs simulate_args;
  auto* simulate_cmd =
      app.add_subcommand("simulate-kill", "proactive-kill savings over checkpoints");
  simulate_cmd->add_option("--model", simulate_args.model, "runtime model JSON")->required();
  simulate_cmd->add_option("--schema", simulate_args.schema, "runtime schema JSON")->required();
  simulate_cmd->add_option("--test", simulate_args.test, "held-out trace CSV")->required();
  simulate_cmd->add_option("--grid", simulate_args.grid, "checkpoints start:end:step");
  simulate_cmd->add_option("--rw-mode", simulate_args.rw_mode,
                           "charge for wrong kills: consumed|full");
  auto* absorbing_flag =
      simulate_cmd->add_flag("--absorbing", "killed jobs leave the simulation (default)");
  simulate_cmd->add_flag("--snapshots", simulate_args.snapshots,
                         "evaluate each checkpoint independently");
  simulate_cmd->add_option("--node-cores", simulate_args.node_cores,
                           "cores per node for node-day conversion");
  simulate_cmd->add_option("--report", simulate_args.report, "savings CSV")->required();
  simulate_cmd->add_option("--svg", simulate_args.svg, "savings chart");

  std::string pipeline_config;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "run the full flow from one config");
  pipeline_cmd->add_option("--config", pipeline_config, "run config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  ingest_args.has_from = from_opt->count() > 0;
  ingest_args.has_to = to_opt->count() > 0;
  generate_args.has_seed = gen_seed->count() > 0;
  calibrate_args.has_seed = cal_seed->count() > 0;
  (void)absorbing_flag;

  try {
    if (ingest->parsed()) cmd_ingest(ingest_args);
    if (generate->parsed()) cmd_generate(generate_args);
    if (calibrate_cmd->parsed()) cmd_calibrate(calibrate_args);
    if (featurize->parsed()) cmd_featurize(featurize_args);
    if (train_cmd->parsed()) cmd_train(train_args);
    if (evaluate_cmd->parsed()) cmd_evaluate(evaluate_args);
    if (sweep_cmd->parsed()) cmd_sweep(sweep_args);
    if (characterize_cmd->parsed()) cmd_characterize(characterize_args);
    if (simulate_cmd->parsed()) cmd_simulate_kill(simulate_args);
    if (pipeline_cmd->parsed()) run_pipeline(pipeline_config);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "wfp: usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wfp: error: %s\n", e.what());
    return 2;
  }
  return 0;
}
