#include "wfp/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wfp/numeric.hpp"

namespace wfp {
namespace {

std::string error_at(std::size_t row, std::string_view column, std::string_view what) {
  std::ostringstream os;
  os << "row " << row << ", column " << column << ": " << what;
  return os.str();
}

std::int64_t parse_int(std::string_view field, std::size_t row, std::string_view column) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(error_at(row, column, "expected an integer, got \"" + std::string(field) + "\""));
  return value;
}

double parse_real(std::string_view field, std::size_t row, std::string_view column) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(error_at(row, column, "expected a number, got \"" + std::string(field) + "\""));
  return value;
}

}  // namespace

std::string csv_header(bool with_label) {
  std::string h;
  for (std::size_t i = 0; i < kColumnNames.size(); ++i) {
    if (i) h += ',';
    h += kColumnNames[i];
  }
  if (with_label) h += ",label";
  return h;
}

WorkloadRecord parse_accounting_line(std::string_view line, int schema_version, std::size_t row) {
  if (schema_version != kCanonicalSchemaVersion)
    throw ParseError("unsupported schema version " + std::to_string(schema_version));
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  std::array<std::string_view, 19> fields;
  std::size_t n_fields = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n_fields >= fields.size())
        throw ParseError(error_at(row, "-", "field-count mismatch: expected 18 fields"));
      fields[n_fields++] = line.substr(begin, i - begin);
      begin = i + 1;
    }
  }
  // A trailing label column from a previously ingested trace is tolerated.
  if (n_fields != 18 && n_fields != 19)
    throw ParseError(error_at(row, "-", "field-count mismatch: expected 18 fields, got " +
                                            std::to_string(n_fields)));

  WorkloadRecord r;
  r.job_id = parse_int(fields[0], row, "job_id");
  r.owner = std::string(fields[1]);
  r.group = std::string(fields[2]);
  r.job_name = std::string(fields[3]);
  r.granted_pe = std::string(fields[4]);
  r.hostname = std::string(fields[5]);
  r.submission = parse_int(fields[6], row, "submission");
  r.start_time = parse_int(fields[7], row, "start_time");
  r.end_time = parse_int(fields[8], row, "end_time");
  r.wallclock = parse_int(fields[9], row, "wallclock");
  r.cpu = parse_real(fields[10], row, "cpu");
  r.mem = parse_real(fields[11], row, "mem");
  r.io = parse_real(fields[12], row, "io");
  r.iow = parse_real(fields[13], row, "iow");
  r.maxvmem = parse_real(fields[14], row, "maxvmem");
  r.slots = parse_int(fields[15], row, "slots");
  r.wait_time = parse_int(fields[16], row, "wait_time");
  r.exit_status = static_cast<int>(parse_int(fields[17], row, "exit_status"));

  if (r.wallclock < 0)
    throw ParseError(error_at(row, "wallclock", "negative wallclock"));
  if (r.exit_status < 0 || r.exit_status > 255)
    throw ParseError(error_at(row, "exit_status",
                              "value outside 0..255: " + std::to_string(r.exit_status)));
  if (n_fields == 19) {
    std::int64_t label = parse_int(fields[18], row, "label");
    if (label != 0 && label != 1)
      throw ParseError(error_at(row, "label", "label must be 0 or 1"));
  }
  return r;
}

std::string to_csv_line(const WorkloadRecord& r) {
  std::string out;
  out.reserve(160);
  out += std::to_string(r.job_id);
  out += ',';
  out += r.owner;
  out += ',';
  out += r.group;
  out += ',';
  out += r.job_name;
  out += ',';
  out += r.granted_pe;
  out += ',';
  out += r.hostname;
  out += ',';
  out += std::to_string(r.submission);
  out += ',';
  out += std::to_string(r.start_time);
  out += ',';
  out += std::to_string(r.end_time);
  out += ',';
  out += std::to_string(r.wallclock);
  out += ',';
  append_double(out, r.cpu);
  out += ',';
  append_double(out, r.mem);
  out += ',';
  append_double(out, r.io);
  out += ',';
  append_double(out, r.iow);
  out += ',';
  append_double(out, r.maxvmem);
  out += ',';
  out += std::to_string(r.slots);
  out += ',';
  out += std::to_string(r.wait_time);
  out += ',';
  out += std::to_string(r.exit_status);
  return out;
}

RecordSet load_trace(const std::filesystem::path& path,
                     std::optional<std::pair<std::int64_t, std::int64_t>> window,
                     std::size_t* skipped) {
  if (window && window->first > window->second)
    throw std::invalid_argument("load_trace: window start exceeds window end");

  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trace: cannot open " + path.string());

  RecordSet rs;
  rs.provenance = path.string();
  if (skipped) *skipped = 0;

  std::string line;
  std::size_t row = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      saw_header = true;
      if (line == csv_header(false) || line == csv_header(true)) continue;
      // No header present: fall through and parse as data.
    }
    try {
      WorkloadRecord r = parse_accounting_line(line, kCanonicalSchemaVersion, row);
      if (window && (r.submission < window->first || r.submission >= window->second)) continue;
      rs.records.push_back(std::move(r));
    } catch (const ParseError&) {
      if (skipped) ++*skipped;
    }
  }
  return rs;
}

void save_trace(const RecordSet& rs, const std::filesystem::path& path, bool with_labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_trace: cannot open " + path.string());
  out << csv_header(with_labels) << '\n';
  for (const auto& r : rs.records) {
    out << to_csv_line(r);
    if (with_labels) out << ',' << label_record(r).value;
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_trace: write failed for " + path.string());
}

RecordSet filter_records(const RecordSet& rs, const FilterOptions& opts) {
  RecordSet out;
  out.provenance = rs.provenance;
  out.records.reserve(rs.records.size());
  for (const auto& r : rs.records) {
    if (opts.drop_never_started && (r.start_time == 0 || r.hostname.empty())) continue;
    if (opts.drop_user_killed && r.exit_status == kUserKilledExitStatus) continue;
    out.records.push_back(r);
  }
  return out;
}

FailureLabel label_record(const WorkloadRecord& r) {
  if (r.exit_status == kUserKilledExitStatus)
    throw std::invalid_argument(
        "label_record: exit status 137 marks a user-killed record; filter it first");
  return FailureLabel{r.exit_status == 0 ? 0 : 1};
}

ExitStatusParts decompose_exit_status(int code) {
  if (code < 0 || code > 255)
    throw std::out_of_range("decompose_exit_status: code outside 0..255: " + std::to_string(code));
  if (code >= 128) return {ExitStatusParts::Kind::signal, code - 128};
  return {ExitStatusParts::Kind::normal, code};
}

}  // namespace wfp
