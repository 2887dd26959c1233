#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wfp {

/// One job accounting entry in the canonical column order.
struct WorkloadRecord {
  std::int64_t job_id = 0;
  std::string owner;
  std::string group;
  std::string job_name;
  std::string granted_pe;
  std::string hostname;
  std::int64_t submission = 0;   // epoch seconds
  std::int64_t start_time = 0;   // epoch seconds, 0 if the job never started
  std::int64_t end_time = 0;     // epoch seconds
  std::int64_t wallclock = 0;    // seconds, end_time - start_time
  double cpu = 0.0;              // cpu-seconds
  double mem = 0.0;              // GB*s, integral memory usage
  double io = 0.0;               // GB transferred
  double iow = 0.0;              // io wait seconds
  double maxvmem = 0.0;          // bytes
  std::int64_t slots = 1;        // parallel processes granted
  std::int64_t wait_time = 0;    // seconds, start_time - submission
  int exit_status = 0;

  bool operator==(const WorkloadRecord&) const = default;
};

struct FailureLabel {
  int value = 0;  // 0 = success, 1 = failure
};

struct RecordSet {
  std::vector<WorkloadRecord> records;
  std::string provenance;  // source path or generator seed
};

struct ExitStatusParts {
  enum class Kind { normal, signal };
  Kind kind = Kind::normal;
  int value = 0;
};

/// Thrown on malformed input rows; the message carries row and column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kCanonicalSchemaVersion = 1;
inline constexpr int kUserKilledExitStatus = 137;  // 128 + SIGKILL, dropped on filter

inline constexpr std::array<std::string_view, 18> kColumnNames = {
    "job_id", "owner",   "group",   "job_name", "granted_pe", "hostname",
    "submission", "start_time", "end_time", "wallclock", "cpu", "mem",
    "io", "iow", "maxvmem", "slots", "wait_time", "exit_status"};

/// Header of the canonical CSV; with_label appends the derived label column.
std::string csv_header(bool with_label = false);

/// Parses one non-header CSV row with the 18 canonical fields. `row` is the
/// 1-based line number used in error messages.
WorkloadRecord parse_accounting_line(std::string_view line, int schema_version,
                                     std::size_t row = 0);

std::string to_csv_line(const WorkloadRecord& r);

/// Loads a canonical CSV trace. The optional window [start, end) restricts on
/// submission time. Rows that do not parse are skipped; pass `skipped` to
/// observe how many.
RecordSet load_trace(const std::filesystem::path& path,
                     std::optional<std::pair<std::int64_t, std::int64_t>> window = {},
                     std::size_t* skipped = nullptr);

void save_trace(const RecordSet& rs, const std::filesystem::path& path,
                bool with_labels = false);

struct FilterOptions {
  bool drop_never_started = true;  // start_time = 0 or empty hostname
  bool drop_user_killed = true;    // exit_status 137
};

/// Removes records that never started and user-killed (exit 137) records.
RecordSet filter_records(const RecordSet& rs, const FilterOptions& opts = {});

/// 0 iff exit_status = 0. Calling this on a user-killed record is a contract
/// violation: those must be filtered out first.
FailureLabel label_record(const WorkloadRecord& r);

/// Splits a 0..255 exit status into (normal, value) or (signal, value - 128).
ExitStatusParts decompose_exit_status(int code);

}  // namespace wfp
