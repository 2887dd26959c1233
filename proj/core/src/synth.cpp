#include "wfp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "wfp/calendar.hpp"
#include "wfp/numeric.hpp"
#include "wfp/rng.hpp"

namespace wfp {
namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, 36> kNameStems = {
    "blast",   "bwa",     "gromacs", "lammps", "vasp",    "openfoam",
    "wrf",     "namd",    "gaussian", "qe",    "amber",   "cp2k",
    "matlab",  "python",  "rstats",  "spark",  "tensor",  "octave",
    "fluent",  "abaqus",  "ansys",   "comsol", "star",    "nwchem",
    "siesta",  "espresso", "dlpoly", "hoomd",  "psi4",    "orca",
    "gatk",    "samtools", "bowtie", "hisat",  "canu",    "trinity"};

constexpr std::array<std::string_view, 6> kNameSuffixes = {"run", "sim",  "test",
                                                           "prod", "scan", "opt"};

constexpr std::array<std::string_view, 4> kParallelEnvs = {"mpi", "smp", "serial", "hybrid"};

// Exit-code mix among failures, excluding the user-killed code 137.
struct ExitCodeWeight {
  int code;
  double weight;
};
constexpr std::array<ExitCodeWeight, 6> kFailureCodes = {{
    {1, 21367.0}, {2, 3032.0}, {7, 6549.0}, {127, 528.0}, {255, 4598.0}, {0, 475.0},
}};
constexpr std::array<int, 6> kOtherFailureCodes = {6, 9, 11, 126, 134, 139};

std::string strip_digits_lower(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c >= '0' && c <= '9') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// Bugginess is a pure function of the digit-stripped name, so every run of a
// buggy program carries the factor and a per-name one-hot column can learn
// it. Values are bimodal: buggy names sit near 1, clean names near 0.
double name_bugginess(std::string_view base_name) {
  std::uint64_t h = fnv1a64(strip_digits_lower(base_name));
  if (h % 1000 < 180) return 0.92 + static_cast<double>((h >> 10) % 80) / 1000.0;
  return static_cast<double>((h >> 10) % 40) / 1000.0;
}

struct UserProfile {
  std::string id;
  bool experienced = true;
  double inexperience = 0.0;  // latent factor, 0 for experienced users
  double submit_rate = 1.0;
  double batch_prob = 0.0;
  int batch_spread = 1;
  std::vector<std::string> name_pool;
  std::vector<double> name_bug;
  std::vector<std::int64_t> run_counter;
  std::vector<double> slot_cdf;
};

struct NodeProfile {
  std::string hostname;
  double vulnerability = 0.0;
};

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = (acc += w[i]);
  return c;
}

std::size_t pick(const std::vector<double>& cdf, Rng& rng) {
  double u = rng.next_unit() * cdf.back();
  return static_cast<std::size_t>(
      std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

constexpr std::array<double, 6> kSlotChoices = {1, 2, 4, 8, 16, 36};

// Buggy programs skew parallel. Spreading the failed jobs' resource excess
// over the bounded slot axis keeps the failed cpu/mem shares stable across
// seeds, unlike the heavy wallclock tail where single draws move the total.
const std::vector<double> kBuggySlotWeights = {0.07, 0.10, 0.17, 0.24, 0.24, 0.18};

// The long-job factor ramps steeply between these wallclock marks, so jobs
// past the ramp form a concentrated failure pocket while shorter jobs are
// unaffected. The marks sit well below the runtime cap: jobs there carry a
// disproportionate share of cpu/mem, which is what couples failure odds to
// resource size.
constexpr double kLongRampLowSeconds = 25200.0;   // 7 h
constexpr double kLongRampHighSeconds = 32400.0;  // 9 h

// Buggy programs tend to hang before dying, so their wallclock draw shifts up
// in log space (about 3x). This concentrates the failed jobs' cpu/mem share
// above their count share without touching the failure odds directly.
constexpr double kBuggyWallclockMuShift = 0.55;

double long_wallclock_factor(std::int64_t wallclock, std::int64_t cap) {
  const double lo = std::log(std::min(kLongRampLowSeconds, 0.5 * static_cast<double>(cap)));
  const double hi = std::log(std::min(kLongRampHighSeconds, static_cast<double>(cap)));
  if (!(lo < hi)) return wallclock >= cap ? 1.0 : 0.0;
  const double v =
      (std::log(static_cast<double>(std::max<std::int64_t>(wallclock, 1))) - lo) / (hi - lo);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_users < 1) throw std::invalid_argument("generator: n_users must be >= 1");
  if (n_nodes < 1) throw std::invalid_argument("generator: n_nodes must be >= 1");
  if (n_racks < 1) throw std::invalid_argument("generator: n_racks must be >= 1");
  if (days < 1) throw std::invalid_argument("generator: days must be >= 1");
  if (jobs_per_day_mean <= 0) throw std::invalid_argument("generator: jobs_per_day_mean must be > 0");
  if (user_experience_mix < 0 || user_experience_mix > 1)
    throw std::invalid_argument("generator: user_experience_mix must be in [0,1]");
  if (runtime_cap < 1) throw std::invalid_argument("generator: runtime_cap must be >= 1");
  if (peak_hour_start < 0 || peak_hour_start > 23 || peak_hour_end < 1 || peak_hour_end > 24 ||
      peak_hour_start >= peak_hour_end)
    throw std::invalid_argument("generator: peak hours must satisfy 0 <= start < end <= 24");
  for (const auto& [name, _] : weights) {
    if (std::find(kFactorNames.begin(), kFactorNames.end(), name) == kFactorNames.end())
      throw std::invalid_argument("generator: unknown factor weight \"" + name + "\"");
  }
}

RecordSet generate_trace(const GeneratorConfig& cfg) {
  cfg.validate();
  auto weight = [&](std::string_view name) {
    auto it = cfg.weights.find(std::string(name));
    return it == cfg.weights.end() ? 0.0 : it->second;
  };
  const double w_user = weight("user_inexperience");
  const double w_node = weight("node_vulnerability");
  const double w_name = weight("name_bugginess");
  const double w_hour = weight("offpeak_hour");
  const double w_long = weight("long_wallclock");

  Rng root(cfg.seed);

  // All distinct base names, partitioned by bugginess. The partition depends
  // only on the fixed stem/suffix tables, never on the seed, which keeps the
  // buggy-name share of a trace stable across seeds.
  std::vector<std::string> buggy_names, clean_names;
  for (const auto stem : kNameStems) {
    for (const auto suffix : kNameSuffixes) {
      std::string base(stem);
      base += '_';
      base += suffix;
      (name_bugginess(base) > 0.5 ? buggy_names : clean_names).push_back(base);
    }
  }

  // Per-user attributes come from streams keyed by user id, so they do not
  // depend on how many jobs end up being drawn. Buggy-name pool entries are
  // assigned by user index (every fifth experienced user; about a third of
  // each inexperienced pool) so their overall share has no sampling variance.
  const int n_exp = static_cast<int>(std::lround(cfg.user_experience_mix * cfg.n_users));
  std::vector<UserProfile> users(cfg.n_users);
  for (int u = 0; u < cfg.n_users; ++u) {
    UserProfile& p = users[u];
    char buf[16];
    std::snprintf(buf, sizeof buf, "u%03d", u);
    p.id = buf;
    Rng r = root.derive("user:" + p.id);
    p.experienced = u < n_exp;
    int pool = 0;
    int buggy_entries = 0;
    if (p.experienced) {
      p.inexperience = 0.0;
      // Users holding a buggy pool entry submit at the class-mean rate, so
      // the buggy-name share of a trace (which carries most of the failed
      // cpu/mem mass) does not swing with the seed.
      buggy_entries = (u % 5 == 2) ? 1 : 0;
      p.submit_rate = buggy_entries ? 7.5 : 3.0 + 9.0 * r.next_unit();
      p.batch_prob = 0.35;
      p.batch_spread = 10;
      p.slot_cdf = cumulative({0.22, 0.16, 0.20, 0.16, 0.15, 0.11});
      pool = 6 + static_cast<int>(r.below(5));
    } else {
      p.inexperience = 0.75 + 0.25 * r.next_unit();
      p.submit_rate = 0.25 + 1.25 * r.next_unit();
      p.batch_prob = 0.08;
      p.batch_spread = 4;
      p.slot_cdf = cumulative({0.55, 0.20, 0.14, 0.07, 0.03, 0.01});
      pool = 3 + static_cast<int>(r.below(4));
      buggy_entries = std::max(1, pool * 2 / 5);
    }
    for (int k = 0; k < pool; ++k) {
      const auto& source = k < buggy_entries ? buggy_names : clean_names;
      std::string base = source[r.below(source.size())];
      for (int tries = 0; tries < 8; ++tries) {
        if (std::find(p.name_pool.begin(), p.name_pool.end(), base) == p.name_pool.end())
          break;
        base = source[r.below(source.size())];
      }
      p.name_pool.push_back(base);
      p.name_bug.push_back(name_bugginess(base));
      p.run_counter.push_back(0);
    }
  }
  std::vector<double> user_cdf;
  {
    std::vector<double> rates(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) rates[i] = users[i].submit_rate;
    user_cdf = cumulative(rates);
  }

  // A small, fixed number of nodes per rack is "sick" (near-certain factor),
  // with racks 1, 3 and 7 holding proportionally more. Fixing the count per
  // rack rather than drawing it keeps the sick share stable across seeds;
  // only the identity of the sick nodes varies.
  std::vector<NodeProfile> nodes(cfg.n_nodes);
  std::vector<std::vector<int>> rack_members(static_cast<std::size_t>(cfg.n_racks));
  for (int i = 0; i < cfg.n_nodes; ++i) {
    const int rack = i % cfg.n_racks + 1;
    const int chassis = i / cfg.n_racks + 1;
    char buf[32];
    std::snprintf(buf, sizeof buf, "cpu-%d-%d", rack, chassis);
    nodes[i].hostname = buf;
    rack_members[static_cast<std::size_t>(rack - 1)].push_back(i);
  }
  for (int rack = 1; rack <= cfg.n_racks; ++rack) {
    auto& members = rack_members[static_cast<std::size_t>(rack - 1)];
    if (members.empty()) continue;
    const bool bad_rack = rack == 1 || rack == 3 || rack == 7;
    const auto count = static_cast<double>(members.size());
    const std::size_t sick = bad_rack ? static_cast<std::size_t>(std::ceil(count * 0.06))
                                      : (members.size() >= 25 ? 1 : 0);
    Rng r = root.derive("rack:" + std::to_string(rack));
    for (std::size_t k = 0; k + 1 < members.size(); ++k) {
      const std::size_t j = k + static_cast<std::size_t>(r.below(members.size() - k));
      std::swap(members[k], members[j]);
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      nodes[static_cast<std::size_t>(members[k])].vulnerability =
          k < sick ? 0.94 + 0.06 * r.next_unit() : 0.02 * r.next_unit();
    }
  }

  // Hour-of-day arrival weights per user class. Experienced users cluster in
  // peak hours; inexperienced users submit on a flatter profile.
  auto hour_cdf = [&](bool experienced) {
    std::vector<double> w(24);
    for (int h = 0; h < 24; ++h) {
      bool peak = h >= cfg.peak_hour_start && h < cfg.peak_hour_end;
      if (experienced)
        w[h] = peak ? cfg.peak_arrival_weight : cfg.offpeak_arrival_weight * 0.5;
      else
        w[h] = peak ? cfg.peak_arrival_weight * 0.45 : cfg.offpeak_arrival_weight * 1.25;
    }
    return cumulative(w);
  };
  const std::vector<double> hour_cdf_exp = hour_cdf(true);
  const std::vector<double> hour_cdf_inexp = hour_cdf(false);

  std::vector<double> exit_cdf;
  {
    std::vector<double> w(kFailureCodes.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = kFailureCodes[i].weight;
    exit_cdf = cumulative(w);
  }
  const std::vector<double> buggy_slot_cdf = cumulative(kBuggySlotWeights);

  RecordSet rs;
  rs.provenance = "synth:seed=" + std::to_string(cfg.seed);
  rs.records.reserve(static_cast<std::size_t>(cfg.days * cfg.jobs_per_day_mean * 1.1));

  Rng day_rng = root.derive("days");
  Rng job_rng = root.derive("jobs");
  std::int64_t next_job_id = 1000000;

  for (int day = 0; day < cfg.days; ++day) {
    std::int64_t day_start = cfg.trace_start_epoch + static_cast<std::int64_t>(day) * 86400;
    int dow = day_of_week(day_start, 0);
    double intensity = cfg.jobs_per_day_mean * (dow >= 5 ? cfg.weekend_arrival_factor : 1.0);
    auto target = static_cast<std::int64_t>(
        std::llround(intensity * std::exp(0.06 * day_rng.normal())));
    target = std::max<std::int64_t>(target, 1);

    std::size_t day_begin = rs.records.size();
    std::int64_t emitted = 0;
    while (emitted < target) {
      const std::size_t ui = pick(user_cdf, job_rng);
      UserProfile& user = users[ui];
      std::int64_t batch = 1;
      if (job_rng.bernoulli(user.batch_prob))
        batch = 2 + static_cast<std::int64_t>(job_rng.below(user.batch_spread));

      const std::size_t ni = job_rng.below(user.name_pool.size());
      std::int64_t run = ++user.run_counter[ni];
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_%04lld", static_cast<long long>(run));
      const std::string job_name = user.name_pool[ni] + suffix;
      const double bug = user.name_bug[ni];

      const int hour = static_cast<int>(
          pick(user.experienced ? hour_cdf_exp : hour_cdf_inexp, job_rng));
      const std::int64_t submission =
          day_start + static_cast<std::int64_t>(hour) * 3600 +
          static_cast<std::int64_t>(job_rng.below(3600));
      const bool offpeak = hour < cfg.peak_hour_start || hour >= cfg.peak_hour_end;
      const std::int64_t job_id = next_job_id++;
      const std::string granted_pe(kParallelEnvs[job_rng.below(kParallelEnvs.size())]);

      for (std::int64_t task = 0; task < batch; ++task) {
        WorkloadRecord r;
        r.job_id = job_id;
        r.owner = user.id;
        r.group = "g" + std::to_string(ui % 8);
        r.job_name = job_name;
        r.granted_pe = granted_pe;
        const std::size_t node_idx = job_rng.below(nodes.size());
        r.hostname = nodes[node_idx].hostname;
        r.submission = submission;

        r.slots = static_cast<std::int64_t>(
            kSlotChoices[pick(bug > 0.5 ? buggy_slot_cdf : user.slot_cdf, job_rng)]);
        const double wallclock_mu =
            cfg.wallclock_mu + (bug > 0.5 ? kBuggyWallclockMuShift : 0.0);
        r.wallclock = std::clamp<std::int64_t>(
            std::llround(job_rng.lognormal(wallclock_mu, cfg.wallclock_sigma)), 1,
            cfg.runtime_cap);
        r.wait_time = std::clamp<std::int64_t>(std::llround(job_rng.lognormal(4.8, 1.2)), 0, 86400);
        r.start_time = r.submission + r.wait_time;
        r.end_time = r.start_time + r.wallclock;

        // Buggy programs spin rather than idle, which lifts the failed cpu
        // share slightly above the failed mem share.
        const double util = job_rng.uniform(bug > 0.5 ? 0.60 : 0.35, 1.0);
        r.cpu = static_cast<double>(r.slots) * static_cast<double>(r.wallclock) * util;
        const double gb_per_slot = job_rng.lognormal(std::log(0.8), 0.45);
        r.mem = static_cast<double>(r.slots) * static_cast<double>(r.wallclock) * gb_per_slot;
        r.io = job_rng.lognormal(std::log(0.5), 1.5);
        r.iow = job_rng.uniform(0.0, 0.02) * static_cast<double>(r.wallclock);
        r.maxvmem = gb_per_slot * static_cast<double>(r.slots) * job_rng.uniform(1.1, 2.2) * 1e9;

        const double z = cfg.base_failure_logit + w_user * user.inexperience +
                         w_node * nodes[node_idx].vulnerability + w_name * bug +
                         w_hour * (offpeak ? 1.0 : 0.0) +
                         w_long * long_wallclock_factor(r.wallclock, cfg.runtime_cap);
        if (job_rng.bernoulli(sigmoid(z))) {
          const std::size_t ci = pick(exit_cdf, job_rng);
          r.exit_status = kFailureCodes[ci].code != 0
                              ? kFailureCodes[ci].code
                              : kOtherFailureCodes[job_rng.below(kOtherFailureCodes.size())];
        } else {
          r.exit_status = 0;
        }
        rs.records.push_back(std::move(r));
      }
      emitted += batch;
    }
    std::stable_sort(rs.records.begin() + static_cast<std::ptrdiff_t>(day_begin),
                     rs.records.end(),
                     [](const WorkloadRecord& a, const WorkloadRecord& b) {
                       return a.submission < b.submission;
                     });
  }
  return rs;
}

TraceStats summary_stats(const RecordSet& rs) {
  if (rs.records.empty()) throw std::invalid_argument("summary_stats: empty record set");

  TraceStats st;
  double cpu_total = 0.0, cpu_failed = 0.0, mem_total = 0.0, mem_failed = 0.0;
  std::int64_t failures = 0;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> by_user, by_node;
  std::array<std::pair<std::int64_t, std::int64_t>, 24> by_hour{};
  std::array<std::pair<std::int64_t, std::int64_t>, 7> by_dow{};

  for (const auto& r : rs.records) {
    const int label = label_record(r).value;
    failures += label;
    cpu_total += r.cpu;
    mem_total += r.mem;
    if (label) {
      cpu_failed += r.cpu;
      mem_failed += r.mem;
    }
    auto& u = by_user[r.owner];
    auto& n = by_node[r.hostname];
    auto& h = by_hour[static_cast<std::size_t>(hour_of_day(r.submission, 0))];
    auto& d = by_dow[static_cast<std::size_t>(day_of_week(r.submission, 0))];
    for (auto* cell : {&u, &n, &h, &d}) {
      cell->first += 1;
      cell->second += label;
    }
  }

  const double n = static_cast<double>(rs.records.size());
  st.failure_count_rate = static_cast<double>(failures) / n;
  st.failed_cpu_share = cpu_total > 0 ? cpu_failed / cpu_total : 0.0;
  st.failed_mem_share = mem_total > 0 ? mem_failed / mem_total : 0.0;
  for (const auto& [user, counts] : by_user)
    st.per_user_rates[user] = static_cast<double>(counts.second) / static_cast<double>(counts.first);
  for (const auto& [node, counts] : by_node)
    st.per_node_rates[node] = static_cast<double>(counts.second) / static_cast<double>(counts.first);
  for (int h = 0; h < 24; ++h)
    st.per_hour_rates[h] = by_hour[h].first
                               ? static_cast<double>(by_hour[h].second) / by_hour[h].first
                               : 0.0;
  for (int d = 0; d < 7; ++d)
    st.per_dow_rates[d] =
        by_dow[d].first ? static_cast<double>(by_dow[d].second) / by_dow[d].first : 0.0;
  return st;
}

GeneratorConfig calibrate(GeneratorConfig cfg, const TraceStats& targets, int max_iters) {
  // Well inside the contractual +/-0.02 so a fresh seed stays within it too.
  constexpr double kTolerance = 0.006;
  double share_gain = 6.0;
  double prev_share_err = 0.0;

  TraceStats achieved;
  for (int iter = 0;; ++iter) {
    achieved = summary_stats(filter_records(generate_trace(cfg)));
    const double rate_err = targets.failure_count_rate - achieved.failure_count_rate;
    const double cpu_err = targets.failed_cpu_share - achieved.failed_cpu_share;
    const double mem_err = targets.failed_mem_share - achieved.failed_mem_share;
    if (std::abs(rate_err) <= kTolerance && std::abs(cpu_err) <= kTolerance &&
        std::abs(mem_err) <= kTolerance)
      return cfg;
    if (iter >= max_iters) {
      std::ostringstream os;
      os << "calibrate: no convergence after " << max_iters << " iterations; last achieved"
         << " rate=" << achieved.failure_count_rate
         << " cpu_share=" << achieved.failed_cpu_share
         << " mem_share=" << achieved.failed_mem_share;
      throw CalibrationError(os.str(), achieved);
    }

    const double share_err = (cpu_err + mem_err) / 2.0;
    if (iter > 0 && share_err * prev_share_err < 0.0) share_gain *= 0.5;
    prev_share_err = share_err;
    cfg.weights["long_wallclock"] += share_gain * share_err;
    cfg.base_failure_logit +=
        logit(targets.failure_count_rate) - logit(achieved.failure_count_rate);
  }
}

GeneratorConfig generator_config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("generator config: expected a JSON object");

  GeneratorConfig cfg;
  static const std::map<std::string, int> known = {
      {"n_users", 0}, {"n_nodes", 0}, {"n_racks", 0}, {"days", 0},
      {"jobs_per_day_mean", 0}, {"user_experience_mix", 0}, {"base_failure_logit", 0},
      {"weights", 0}, {"wallclock_lognormal", 0}, {"runtime_cap", 0}, {"seed", 0},
      {"trace_start_epoch", 0}, {"peak_hour_start", 0}, {"peak_hour_end", 0},
      {"peak_arrival_weight", 0}, {"offpeak_arrival_weight", 0}, {"weekend_arrival_factor", 0}};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key))
      throw std::invalid_argument("generator config: unknown key \"" + key + "\"");
  }

  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("n_users", cfg.n_users);
  get("n_nodes", cfg.n_nodes);
  get("n_racks", cfg.n_racks);
  get("days", cfg.days);
  get("jobs_per_day_mean", cfg.jobs_per_day_mean);
  get("user_experience_mix", cfg.user_experience_mix);
  get("base_failure_logit", cfg.base_failure_logit);
  get("runtime_cap", cfg.runtime_cap);
  get("seed", cfg.seed);
  get("trace_start_epoch", cfg.trace_start_epoch);
  get("peak_hour_start", cfg.peak_hour_start);
  get("peak_hour_end", cfg.peak_hour_end);
  get("peak_arrival_weight", cfg.peak_arrival_weight);
  get("offpeak_arrival_weight", cfg.offpeak_arrival_weight);
  get("weekend_arrival_factor", cfg.weekend_arrival_factor);
  if (j.contains("weights")) {
    cfg.weights.clear();
    for (const auto& [name, value] : j.at("weights").items())
      cfg.weights[name] = value.get<double>();
  }
  if (j.contains("wallclock_lognormal")) {
    const auto& p = j.at("wallclock_lognormal");
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument("generator config: wallclock_lognormal must be [mu, sigma]");
    cfg.wallclock_mu = p[0].get<double>();
    cfg.wallclock_sigma = p[1].get<double>();
  }
  cfg.validate();
  return cfg;
}

std::string generator_config_to_json_text(const GeneratorConfig& cfg) {
  json j;
  j["n_users"] = cfg.n_users;
  j["n_nodes"] = cfg.n_nodes;
  j["n_racks"] = cfg.n_racks;
  j["days"] = cfg.days;
  j["jobs_per_day_mean"] = cfg.jobs_per_day_mean;
  j["user_experience_mix"] = cfg.user_experience_mix;
  j["base_failure_logit"] = cfg.base_failure_logit;
  j["weights"] = cfg.weights;
  j["wallclock_lognormal"] = json::array({cfg.wallclock_mu, cfg.wallclock_sigma});
  j["runtime_cap"] = cfg.runtime_cap;
  j["seed"] = cfg.seed;
  j["trace_start_epoch"] = cfg.trace_start_epoch;
  j["peak_hour_start"] = cfg.peak_hour_start;
  j["peak_hour_end"] = cfg.peak_hour_end;
  j["peak_arrival_weight"] = cfg.peak_arrival_weight;
  j["offpeak_arrival_weight"] = cfg.offpeak_arrival_weight;
  j["weekend_arrival_factor"] = cfg.weekend_arrival_factor;
  return j.dump(2) + "\n";
}

}  // namespace wfp
