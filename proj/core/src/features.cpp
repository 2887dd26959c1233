#include "wfp/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "wfp/calendar.hpp"
#include "wfp/numeric.hpp"
#include "wfp/rng.hpp"

namespace wfp {

using nlohmann::json;

std::string to_string(FeatureMode mode) {
  return mode == FeatureMode::queue ? "queue" : "runtime";
}

FeatureMode feature_mode_from_string(const std::string& s) {
  if (s == "queue") return FeatureMode::queue;
  if (s == "runtime") return FeatureMode::runtime;
  throw std::invalid_argument("unknown feature mode: " + s);
}

DerivedFeatures derive_features(const WorkloadRecord& r, std::int64_t tz_offset_seconds) {
  if (r.wallclock <= 0) {
    throw std::invalid_argument("derive_features: degenerate record (wallclock <= 0), job_id " +
                                std::to_string(r.job_id));
  }
  if (r.slots <= 0) {
    throw std::invalid_argument("derive_features: degenerate record (slots <= 0), job_id " +
                                std::to_string(r.job_id));
  }
  DerivedFeatures d;
  d.hour_of_day = hour_of_day(r.submission, tz_offset_seconds);
  d.day_of_week = day_of_week(r.submission, tz_offset_seconds);
  d.cpu_intensity = (r.cpu / static_cast<double>(r.slots)) / static_cast<double>(r.wallclock);
  d.avg_mem = r.mem / static_cast<double>(r.wallclock);
  return d;
}

double edit_similarity(const std::string& a, const std::string& b) {
  if (a == b) return 1.0;
  const std::size_t la = a.size(), lb = b.size();
  if (la == 0 || lb == 0) return 0.0;
  std::vector<std::size_t> prev(lb + 1), cur(lb + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= la; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= lb; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  const double dist = static_cast<double>(prev[lb]);
  return 1.0 - dist / static_cast<double>(std::max(la, lb));
}

namespace {

std::string strip_digits_lower(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isdigit(u)) continue;
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

RecordSet normalize_job_names(const RecordSet& rs, double similarity_threshold) {
  if (!(similarity_threshold > 0.0) || similarity_threshold > 1.0) {
    throw std::invalid_argument("normalize_job_names: threshold must be in (0,1]");
  }
  RecordSet out = rs;

  // Group record indices by owner, then cluster the owner's distinct
  // normalized forms so the pairwise comparisons stay small.
  std::map<std::string, std::vector<std::size_t>> by_owner;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    by_owner[out.records[i].owner].push_back(i);
  }

  for (auto& [owner, idxs] : by_owner) {
    std::map<std::string, std::vector<std::size_t>> by_norm;
    for (std::size_t i : idxs) by_norm[strip_digits_lower(out.records[i].job_name)].push_back(i);

    std::vector<std::string> norms;
    norms.reserve(by_norm.size());
    for (const auto& [norm, unused] : by_norm) norms.push_back(norm);

    UnionFind uf(norms.size());
    for (std::size_t a = 0; a + 1 < norms.size(); ++a) {
      for (std::size_t b = a + 1; b < norms.size(); ++b) {
        if (edit_similarity(norms[a], norms[b]) >= similarity_threshold) uf.unite(a, b);
      }
    }

    // Canonical name per cluster: lexicographically smallest original name.
    std::map<std::size_t, std::string> canonical;
    for (std::size_t k = 0; k < norms.size(); ++k) {
      const std::size_t root = uf.find(k);
      for (std::size_t i : by_norm[norms[k]]) {
        auto it = canonical.find(root);
        if (it == canonical.end() || out.records[i].job_name < it->second) {
          canonical[root] = out.records[i].job_name;
        }
      }
    }
    for (std::size_t k = 0; k < norms.size(); ++k) {
      const std::string& name = canonical[uf.find(k)];
      for (std::size_t i : by_norm[norms[k]]) out.records[i].job_name = name;
    }
  }
  return out;
}

namespace {

const std::vector<std::string> kCategoricalColumns = {
    "owner", "group", "job_name", "granted_pe", "hostname", "hour_of_day", "day_of_week"};
const std::vector<std::string> kQueueNumericColumns = {"slots"};
const std::vector<std::string> kRuntimeNumericColumns = {
    "slots", "cpu", "mem", "io", "iow", "maxvmem", "wallclock", "wait_time",
    "cpu_intensity", "avg_mem"};

std::string categorical_value(const WorkloadRecord& r, const DerivedFeatures& d,
                              const std::string& column) {
  if (column == "owner") return r.owner;
  if (column == "group") return r.group;
  if (column == "job_name") return r.job_name;
  if (column == "granted_pe") return r.granted_pe;
  if (column == "hostname") return r.hostname;
  if (column == "hour_of_day") return std::to_string(d.hour_of_day);
  if (column == "day_of_week") return std::to_string(d.day_of_week);
  throw std::logic_error("unknown categorical column: " + column);
}

double numeric_value(const WorkloadRecord& r, const DerivedFeatures& d,
                     const std::string& column) {
  if (column == "slots") return static_cast<double>(r.slots);
  if (column == "cpu") return r.cpu;
  if (column == "mem") return r.mem;
  if (column == "io") return r.io;
  if (column == "iow") return r.iow;
  if (column == "maxvmem") return r.maxvmem;
  if (column == "wallclock") return static_cast<double>(r.wallclock);
  if (column == "wait_time") return static_cast<double>(r.wait_time);
  if (column == "cpu_intensity") return d.cpu_intensity;
  if (column == "avg_mem") return d.avg_mem;
  throw std::logic_error("unknown numeric column: " + column);
}

}  // namespace

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> names;
  for (const auto& col : categorical_columns) {
    for (const auto& v : categorical_vocab.at(col)) names.push_back(col + "=" + v);
  }
  for (const auto& col : numeric_columns) names.push_back(col);
  return names;
}

FeatureSchema fit_schema(const RecordSet& train, FeatureMode mode,
                         std::int64_t tz_offset_seconds) {
  if (train.records.empty()) throw std::invalid_argument("fit_schema: empty training set");

  FeatureSchema s;
  s.mode = mode;
  s.tz_offset = tz_offset_seconds;
  s.categorical_columns = kCategoricalColumns;
  s.numeric_columns =
      mode == FeatureMode::queue ? kQueueNumericColumns : kRuntimeNumericColumns;

  std::map<std::string, std::set<std::string>> vocab_sets;
  struct Welford {
    std::int64_t n = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double x) {
      ++n;
      const double d1 = x - mean;
      mean += d1 / static_cast<double>(n);
      m2 += d1 * (x - mean);
    }
  };
  std::map<std::string, Welford> acc;

  for (const auto& r : train.records) {
    const DerivedFeatures d = derive_features(r, tz_offset_seconds);
    for (const auto& col : s.categorical_columns) vocab_sets[col].insert(categorical_value(r, d, col));
    for (const auto& col : s.numeric_columns) acc[col].add(numeric_value(r, d, col));
  }

  std::size_t dim = 0;
  for (const auto& col : s.categorical_columns) {
    auto& list = s.categorical_vocab[col];
    list.assign(vocab_sets[col].begin(), vocab_sets[col].end());
    dim += list.size();
  }
  for (const auto& col : s.numeric_columns) {
    const Welford& w = acc[col];
    NumericStat st;
    st.mean = w.mean;
    st.stddev = (w.n > 1 && w.m2 > 0.0)
                    ? std::sqrt(w.m2 / static_cast<double>(w.n - 1))
                    : 0.0;
    s.numeric_stats[col] = st;
    ++dim;
  }
  s.output_dimension = dim;
  return s;
}

Dataset encode(const RecordSet& rs, const FeatureSchema& schema) {
  Dataset ds;
  ds.schema = schema;
  const auto n = static_cast<Eigen::Index>(rs.records.size());
  ds.rows = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(schema.output_dimension));
  ds.labels.reserve(rs.records.size());
  ds.row_provenance.resize(rs.records.size());

  // Per-column category -> position lookup, plus the block offsets.
  std::vector<std::unordered_map<std::string, Eigen::Index>> lookup;
  std::vector<Eigen::Index> offsets;
  Eigen::Index off = 0;
  for (const auto& col : schema.categorical_columns) {
    const auto& vocab = schema.categorical_vocab.at(col);
    std::unordered_map<std::string, Eigen::Index> m;
    m.reserve(vocab.size());
    for (std::size_t k = 0; k < vocab.size(); ++k) m[vocab[k]] = static_cast<Eigen::Index>(k);
    lookup.push_back(std::move(m));
    offsets.push_back(off);
    off += static_cast<Eigen::Index>(vocab.size());
  }

  for (std::size_t i = 0; i < rs.records.size(); ++i) {
    const WorkloadRecord& r = rs.records[i];
    const DerivedFeatures d = derive_features(r, schema.tz_offset);
    const auto row = static_cast<Eigen::Index>(i);
    for (std::size_t c = 0; c < schema.categorical_columns.size(); ++c) {
      const std::string v = categorical_value(r, d, schema.categorical_columns[c]);
      auto it = lookup[c].find(v);
      if (it != lookup[c].end()) ds.rows(row, offsets[c] + it->second) = 1.0;
    }
    Eigen::Index j = off;
    for (const auto& col : schema.numeric_columns) {
      const NumericStat& st = schema.numeric_stats.at(col);
      const double x = numeric_value(r, d, col);
      ds.rows(row, j++) = st.stddev > 0.0 ? (x - st.mean) / st.stddev : 0.0;
    }
    ds.labels.push_back(label_record(r).value);
    ds.row_provenance[i] = i;
  }
  return ds;
}

std::string FeatureSchema::to_json_text() const {
  json j;
  j["format_version"] = 1;
  j["mode"] = wfp::to_string(mode);
  j["tz_offset"] = tz_offset;
  j["categorical_columns"] = categorical_columns;
  json vocab = json::object();
  for (const auto& [col, list] : categorical_vocab) vocab[col] = list;
  j["categorical_vocab"] = vocab;
  j["numeric_columns"] = numeric_columns;
  json stats = json::object();
  for (const auto& [col, st] : numeric_stats) {
    stats[col] = json{{"mean", st.mean}, {"stddev", st.stddev}};
  }
  j["numeric_stats"] = stats;
  j["output_dimension"] = output_dimension;
  return j.dump(2) + "\n";
}

FeatureSchema FeatureSchema::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("feature schema: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("feature schema: expected a JSON object");
  const int version = j.value("format_version", -1);
  if (version != 1) {
    throw std::runtime_error("feature schema: unsupported format_version " +
                             std::to_string(version));
  }
  FeatureSchema s;
  try {
    s.mode = feature_mode_from_string(j.at("mode").get<std::string>());
    s.tz_offset = j.at("tz_offset").get<std::int64_t>();
    s.categorical_columns = j.at("categorical_columns").get<std::vector<std::string>>();
    for (const auto& [col, list] : j.at("categorical_vocab").items()) {
      s.categorical_vocab[col] = list.get<std::vector<std::string>>();
    }
    s.numeric_columns = j.at("numeric_columns").get<std::vector<std::string>>();
    for (const auto& [col, st] : j.at("numeric_stats").items()) {
      s.numeric_stats[col] = NumericStat{st.at("mean").get<double>(),
                                         st.at("stddev").get<double>()};
    }
    s.output_dimension = j.at("output_dimension").get<std::size_t>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("feature schema: missing or bad field: ") + e.what());
  }
  std::size_t dim = s.numeric_columns.size();
  for (const auto& col : s.categorical_columns) {
    auto it = s.categorical_vocab.find(col);
    if (it == s.categorical_vocab.end()) {
      throw std::runtime_error("feature schema: no vocab for column " + col);
    }
    dim += it->second.size();
  }
  if (dim != s.output_dimension) {
    throw std::runtime_error("feature schema: output_dimension does not match columns");
  }
  return s;
}

std::string FeatureSchema::fingerprint() const {
  const std::uint64_t h = fnv1a64(to_json_text());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  const auto names = ds.schema.feature_names();
  std::string line;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) line.push_back(',');
    line += names[j];
  }
  line += ",label\n";
  out << line;
  for (Eigen::Index i = 0; i < ds.rows.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < ds.rows.cols(); ++j) {
      if (j) line.push_back(',');
      append_double(line, ds.rows(i, j));
    }
    line.push_back(',');
    line += std::to_string(ds.labels[static_cast<std::size_t>(i)]);
    line.push_back('\n');
    out << line;
  }
  if (!out) throw std::runtime_error("short write: " + path.string());

  std::ofstream meta(path.string() + ".meta.json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot open for writing: " + path.string() + ".meta.json");
  json m;
  m["schema"] = json::parse(ds.schema.to_json_text());
  m["schema_fingerprint"] = ds.schema.fingerprint();
  m["rows"] = ds.rows.rows();
  meta << m.dump(2) << "\n";
}

Dataset load_dataset(const std::filesystem::path& path) {
  const std::string meta_path = path.string() + ".meta.json";
  std::ifstream meta(meta_path, std::ios::binary);
  if (!meta) throw std::runtime_error("cannot open dataset sidecar: " + meta_path);
  json m;
  try {
    meta >> m;
  } catch (const json::exception& e) {
    throw std::runtime_error("dataset sidecar: invalid JSON: " + std::string(e.what()));
  }
  Dataset ds;
  ds.schema = FeatureSchema::from_json_text(m.at("schema").dump());

  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset: " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("dataset is empty: " + path.string());

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  const auto n = static_cast<Eigen::Index>(lines.size());
  const auto d = static_cast<Eigen::Index>(ds.schema.output_dimension);
  ds.rows.resize(n, d);
  ds.labels.resize(lines.size());
  ds.row_provenance.resize(lines.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string& l = lines[static_cast<std::size_t>(i)];
    Eigen::Index col = 0;
    std::size_t pos = 0;
    while (pos <= l.size() && col <= d) {
      std::size_t next = l.find(',', pos);
      if (next == std::string::npos) next = l.size();
      const std::string tok = l.substr(pos, next - pos);
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str()) {
        throw std::runtime_error("dataset row " + std::to_string(i + 2) +
                                 ": non-numeric value '" + tok + "'");
      }
      if (col < d) {
        ds.rows(i, col) = v;
      } else {
        ds.labels[static_cast<std::size_t>(i)] = static_cast<int>(v);
      }
      ++col;
      pos = next + 1;
    }
    if (col != d + 1) {
      throw std::runtime_error("dataset row " + std::to_string(i + 2) +
                               ": expected " + std::to_string(d + 1) + " columns");
    }
    ds.row_provenance[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  }
  return ds;
}

}  // namespace wfp
