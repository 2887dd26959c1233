#include "reports.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "wfp/model.hpp"
#include "wfp/numeric.hpp"
#include "wfp/trace.hpp"

namespace wfp::cli {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt(double v) { return fmt_double(v); }

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  std::string line;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) line.push_back(',');
    line += header[i];
  }
  line.push_back('\n');
  out << line;
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::logic_error("report row width does not match header: " + path.string());
    }
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line.push_back(',');
      line += row[i];
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw std::runtime_error("short write: " + path.string());
}

void write_sidecar(const std::filesystem::path& artifact, std::uint64_t config_hash,
                   std::uint64_t seed) {
  const std::filesystem::path meta_path = artifact.string() + ".meta.json";
  json meta = json::object();
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path, std::ios::binary);
    try {
      in >> meta;
    } catch (const json::exception&) {
      meta = json::object();
    }
  }
  meta["config_hash"] = hex64(config_hash);
  meta["seed"] = seed;
  meta["versions"] = json{{"tool", kToolVersion},
                          {"trace_schema", kCanonicalSchemaVersion},
                          {"feature_schema", 1},
                          {"model_format", 1}};
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + meta_path.string());
  out << meta.dump(2) << "\n";
}

namespace {

const char* kDayNames[7] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

}  // namespace

void write_characterization_reports(const CharacterizationReport& rep,
                                    const std::filesystem::path& outdir, bool charts,
                                    std::uint64_t config_hash, std::uint64_t seed) {
  std::filesystem::create_directories(outdir);
  auto emit = [&](const std::filesystem::path& name, const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
    const auto path = outdir / name;
    write_csv(path, header, rows);
    write_sidecar(path, config_hash, seed);
  };

  std::vector<std::vector<std::string>> rows;
  for (const auto& [host, g] : rep.by_node) {
    rows.push_back({host, std::to_string(g.count), std::to_string(g.failures), fmt(g.rate())});
  }
  emit("by_node.csv", {"hostname", "count", "failures", "rate"}, rows);

  rows.clear();
  for (const auto& [key, g] : rep.by_rack_chassis) {
    rows.push_back({std::to_string(key.first), std::to_string(key.second),
                    std::to_string(g.count), std::to_string(g.failures), fmt(g.rate())});
  }
  emit("by_rack_chassis.csv", {"rack", "chassis", "count", "failures", "rate"}, rows);

  rows.clear();
  for (const auto& [owner, g] : rep.by_user) {
    rows.push_back({owner, std::to_string(g.count), std::to_string(g.failures), fmt(g.rate())});
  }
  emit("by_user.csv", {"owner", "count", "failures", "rate"}, rows);

  rows.clear();
  for (int h = 0; h < 24; ++h) {
    const auto& g = rep.by_hour[static_cast<std::size_t>(h)];
    rows.push_back({std::to_string(h), std::to_string(g.count), std::to_string(g.failures),
                    fmt(g.rate())});
  }
  emit("by_hour.csv", {"hour", "count", "failures", "rate"}, rows);

  rows.clear();
  for (int d = 0; d < 7; ++d) {
    const auto& g = rep.by_dow[static_cast<std::size_t>(d)];
    rows.push_back({std::to_string(d), kDayNames[d], std::to_string(g.count),
                    std::to_string(g.failures), fmt(g.rate())});
  }
  emit("by_dow.csv", {"day_index", "day", "count", "failures", "rate"}, rows);

  rows.clear();
  for (const auto& [bin, g] : rep.by_wallclock_bin) {
    rows.push_back({std::to_string(bin), std::to_string(bin + rep.wallclock_bin_width),
                    std::to_string(g.count), std::to_string(g.failures), fmt(g.rate())});
  }
  emit("by_wallclock.csv", {"bin_start_seconds", "bin_end_seconds", "count", "failures", "rate"},
       rows);

  rows.clear();
  rows.push_back({std::to_string(rep.total), std::to_string(rep.total_failures),
                  fmt(rep.total > 0 ? static_cast<double>(rep.total_failures) /
                                          static_cast<double>(rep.total)
                                    : 0.0)});
  emit("summary.csv", {"total", "failures", "rate"}, rows);

  if (!charts) return;

  ChartSpec hour;
  hour.kind = ChartSpec::Kind::bar;
  hour.title = "Failure rate by hour of day";
  hour.x_label = "hour";
  hour.y_label = "failure rate";
  Series hour_s{"rate", {}};
  for (int h = 0; h < 24; ++h) {
    hour.x_ticks.push_back(std::to_string(h));
    hour_s.values.push_back(rep.by_hour[static_cast<std::size_t>(h)].rate());
  }
  hour.series.push_back(hour_s);
  render_chart(hour, outdir / "by_hour.svg");
  write_sidecar(outdir / "by_hour.svg", config_hash, seed);

  ChartSpec dow;
  dow.kind = ChartSpec::Kind::bar;
  dow.title = "Failure rate by day of week";
  dow.x_label = "day";
  dow.y_label = "failure rate";
  Series dow_s{"rate", {}};
  for (int d = 0; d < 7; ++d) {
    dow.x_ticks.push_back(kDayNames[d]);
    dow_s.values.push_back(rep.by_dow[static_cast<std::size_t>(d)].rate());
  }
  dow.series.push_back(dow_s);
  render_chart(dow, outdir / "by_dow.svg");
  write_sidecar(outdir / "by_dow.svg", config_hash, seed);

  // Rack x chassis heatmap over the observed grid; absent cells show 0.
  std::set<int> racks, chassis;
  for (const auto& [key, unused] : rep.by_rack_chassis) {
    racks.insert(key.first);
    chassis.insert(key.second);
  }
  if (!racks.empty()) {
    ChartSpec heat;
    heat.kind = ChartSpec::Kind::heatmap;
    heat.title = "Failure rate by rack and chassis";
    heat.x_label = "chassis";
    for (int c : chassis) heat.x_ticks.push_back(std::to_string(c));
    for (int r : racks) {
      Series s{"rack " + std::to_string(r), {}};
      for (int c : chassis) {
        auto it = rep.by_rack_chassis.find({r, c});
        s.values.push_back(it == rep.by_rack_chassis.end() ? 0.0 : it->second.rate());
      }
      heat.series.push_back(std::move(s));
    }
    render_chart(heat, outdir / "by_rack_chassis.svg");
    write_sidecar(outdir / "by_rack_chassis.svg", config_hash, seed);
  }

  if (!rep.by_wallclock_bin.empty()) {
    ChartSpec wc;
    wc.kind = ChartSpec::Kind::bar;
    wc.title = "Failure rate by wallclock bin";
    wc.x_label = "wallclock bin start (s)";
    wc.y_label = "failure rate";
    Series wc_s{"rate", {}};
    for (const auto& [bin, g] : rep.by_wallclock_bin) {
      wc.x_ticks.push_back(std::to_string(bin));
      wc_s.values.push_back(g.rate());
    }
    wc.series.push_back(wc_s);
    render_chart(wc, outdir / "by_wallclock.svg");
    write_sidecar(outdir / "by_wallclock.svg", config_hash, seed);
  }
}

void write_savings_report(const SavingsCurve& curve, const std::filesystem::path& path,
                          std::uint64_t config_hash, std::uint64_t seed) {
  std::vector<std::vector<std::string>> rows;
  for (const SavingsPoint& p : curve.points) {
    rows.push_back({std::to_string(p.t), fmt(p.r_saving_cpu), fmt(p.r_saving_mem),
                    fmt(node_days(p.r_s_cpu - p.r_w_cpu, curve.node_cores)),
                    std::to_string(p.n_running), std::to_string(p.n_killed_correct),
                    std::to_string(p.n_killed_wrong), fmt(p.metrics_at_t.recall),
                    fmt(p.metrics_at_t.precision), fmt(p.metrics_at_t.f1)});
  }
  write_csv(path,
            {"t", "r_saving_cpu", "r_saving_mem", "node_days_saved", "n_running",
             "n_killed_correct", "n_killed_wrong", "recall", "precision", "f1"},
            rows);
  write_sidecar(path, config_hash, seed);
}

void write_savings_chart(const SavingsCurve& curve, const std::filesystem::path& path) {
  ChartSpec spec;
  spec.kind = ChartSpec::Kind::line;
  spec.title = "Resource savings by kill checkpoint";
  spec.x_label = "checkpoint (s after job start)";
  spec.y_label = "fraction of total usage";
  Series cpu{"cpu", {}}, mem{"mem", {}};
  for (const SavingsPoint& p : curve.points) {
    spec.x_ticks.push_back(std::to_string(p.t));
    cpu.values.push_back(p.r_saving_cpu);
    mem.values.push_back(p.r_saving_mem);
  }
  spec.series = {cpu, mem};
  render_chart(spec, path);
}

void write_sweep_report(const SweepReport& rep, const std::filesystem::path& path,
                        std::uint64_t config_hash, std::uint64_t seed) {
  std::vector<std::vector<std::string>> rows;
  for (const SweepRow& r : rep.rows) {
    rows.push_back({std::to_string(r.days), fmt(r.scores.recall), fmt(r.scores.precision),
                    fmt(r.scores.f1), fmt(r.scores.training_time),
                    std::to_string(r.train_rows), std::to_string(r.counts.tp),
                    std::to_string(r.counts.fp), std::to_string(r.counts.tn),
                    std::to_string(r.counts.fn)});
  }
  write_csv(path,
            {"days", "recall", "precision", "f1", "training_time_seconds", "train_rows",
             "tp", "fp", "tn", "fn"},
            rows);
  write_sidecar(path, config_hash, seed);
}

}  // namespace wfp::cli
