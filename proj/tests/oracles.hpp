#pragma once

// Independent oracles: every function here re-derives its answer from first
// principles (exhaustive enumeration, closed forms, literal hand arithmetic)
// rather than calling the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "wfp/eval.hpp"
#include "wfp/model.hpp"
#include "wfp/rng.hpp"

#include "test_util.hpp"

namespace wfp::test {

/// Direct substitution into the recall/precision/F1 definitions with the
/// 0/0 -> 0 convention.
inline MetricScores metrics_oracle(const ConfusionCounts& c) {
  MetricScores s;
  const double tp = static_cast<double>(c.tp);
  const double actual = static_cast<double>(c.tp + c.fn);
  const double predicted = static_cast<double>(c.tp + c.fp);
  s.recall = actual > 0.0 ? tp / actual : 0.0;
  s.precision = predicted > 0.0 ? tp / predicted : 0.0;
  const double denom = s.recall + s.precision;
  s.f1 = denom > 0.0 ? 2.0 * s.recall * s.precision / denom : 0.0;
  return s;
}

inline ConfusionCounts random_confusion(Rng& rng) {
  auto cell = [&]() -> std::int64_t {
    switch (rng.below(4)) {
      case 0: return 0;  // exercise the 0/0 branches often
      case 1: return static_cast<std::int64_t>(rng.below(4));
      case 2: return static_cast<std::int64_t>(rng.below(1000));
      default: return static_cast<std::int64_t>(rng.below(2'000'000'000));
    }
  };
  return ConfusionCounts{cell(), cell(), cell(), cell()};
}

/// Exhaustive enumeration of every (feature, midpoint) candidate with the
/// documented tie-break: highest impurity decrease, then lowest feature
/// index, then lowest threshold. Only splits that strictly decrease impurity
/// qualify. Thresholds here are exact midpoints; datasets fed to this oracle
/// draw values from coarse grids so the midpoint is always representable and
/// never collides with a data value.
inline std::optional<Split> brute_force_best_split(const Eigen::MatrixXd& X,
                                                   const std::vector<int>& labels,
                                                   std::span<const int> rows,
                                                   std::span<const int> features) {
  const auto n = static_cast<double>(rows.size());
  if (rows.size() < 2) return std::nullopt;

  auto gini = [](std::int64_t a, std::int64_t b) {
    const double total = static_cast<double>(a + b);
    const double pa = static_cast<double>(a) / total;
    const double pb = static_cast<double>(b) / total;
    return 1.0 - (pa * pa + pb * pb);
  };

  std::int64_t c1 = 0;
  for (int r : rows) c1 += labels[static_cast<std::size_t>(r)];
  const std::int64_t c0 = static_cast<std::int64_t>(rows.size()) - c1;
  if (c0 == 0 || c1 == 0) return std::nullopt;
  const double parent = gini(c0, c1);

  std::optional<Split> best;
  for (int f : features) {
    std::vector<double> values;
    for (int r : rows) values.push_back(X(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double threshold = 0.5 * (values[k] + values[k + 1]);
      std::int64_t l0 = 0, l1 = 0;
      for (int r : rows) {
        if (X(r, f) <= threshold) labels[static_cast<std::size_t>(r)] ? ++l1 : ++l0;
      }
      const std::int64_t r0 = c0 - l0, r1 = c1 - l1;
      const double ln = static_cast<double>(l0 + l1);
      const double rn = static_cast<double>(r0 + r1);
      const double decrease = parent - ((ln / n) * gini(l0, l1) + (rn / n) * gini(r0, r1));
      if (decrease <= 0.0) continue;
      const bool wins =
          !best || decrease > best->impurity_decrease ||
          (decrease == best->impurity_decrease &&
           (f < best->feature || (f == best->feature && threshold < best->threshold)));
      if (wins) best = Split{f, threshold, decrease};
    }
  }
  return best;
}

struct SplitCase {
  Eigen::MatrixXd X;
  std::vector<int> labels;
  std::vector<int> rows;
  std::vector<int> features;
};

/// Random small dataset on a coarse value grid (integers, or halves), with a
/// random candidate-feature subset half the time.
inline SplitCase random_split_case(Rng& rng) {
  SplitCase sc;
  const int n = 2 + static_cast<int>(rng.below(11));   // 2..12 rows
  const int d = 1 + static_cast<int>(rng.below(4));    // 1..4 features
  const int grid = 2 + static_cast<int>(rng.below(4)); // values 0..grid-1
  sc.X.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      sc.X(i, j) = static_cast<double>(rng.below(static_cast<std::uint64_t>(grid)));
      if (rng.bernoulli(0.25)) sc.X(i, j) += 0.5;  // off-grid halves
    }
    sc.labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
    sc.rows.push_back(i);
  }
  for (int j = 0; j < d; ++j) sc.features.push_back(j);
  if (d > 1 && rng.bernoulli(0.5)) {
    // Drop a random feature from the candidate list (keep at least one).
    sc.features.erase(sc.features.begin() +
                      static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(d))));
  }
  return sc;
}

/// Hand-computed Gaussian naive Bayes posterior for the fixed 4-row,
/// 2-feature example used by the closed-form criterion. Class 0 holds
/// (1,2),(3,4); class 1 holds (10,0),(14,2). All moments below are written
/// out from pencil-and-paper arithmetic, population convention:
///   mean0 = (2, 3)    var0 = (1, 1)
///   mean1 = (12, 1)   var1 = (4, 1)
///   overall feature variances = (27.5, 2) -> smoothing eps = 27.5e-9
/// Posterior at x follows from the log-likelihood sum with equal priors.
inline std::array<double, 2> gnb_hand_posterior(double x0, double x1) {
  constexpr double kPi = 3.14159265358979323846;
  const double eps = 27.5e-9;
  const double mean[2][2] = {{2.0, 3.0}, {12.0, 1.0}};
  const double var[2][2] = {{1.0 + eps, 1.0 + eps}, {4.0 + eps, 1.0 + eps}};
  const double log_prior = std::log(0.5);
  double ll[2];
  for (int c = 0; c < 2; ++c) {
    double acc = log_prior;
    const double x[2] = {x0, x1};
    for (int j = 0; j < 2; ++j) {
      const double diff = x[j] - mean[c][j];
      acc -= 0.5 * (std::log(2.0 * kPi * var[c][j]) + diff * diff / var[c][j]);
    }
    ll[c] = acc;
  }
  const double hi = std::max(ll[0], ll[1]);
  const double e0 = std::exp(ll[0] - hi);
  const double e1 = std::exp(ll[1] - hi);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

/// The training rows matching gnb_hand_posterior's constants.
inline Dataset gnb_hand_dataset() {
  Eigen::MatrixXd X(4, 2);
  X << 1, 2,
       3, 4,
       10, 0,
       14, 2;
  return make_dataset(std::move(X), {0, 0, 1, 1});
}

/// Hand-computed SavingsPoint expectations for the fixed 4-job kill scenario
/// at checkpoint t = 400, in both wasted-work conventions:
///
///   job A: fails,    wallclock 1000, cpu 1000, mem 500
///   job B: fails,    wallclock  300, cpu  600, mem 300
///   job C: succeeds, wallclock  800, cpu  400, mem 800
///   job D: succeeds, wallclock  200, cpu  200, mem 100
///
/// The kill policy in play terminates every still-running job; at t = 400
/// only A and C are running (wallclock > t), so A is killed correctly and C
/// wrongly while B and D already finished. Usage-to-date scales linearly
/// with elapsed runtime:
///
///   A: cru = (1000, 500) * 400/1000 = (400, 200)  future = (600, 300)
///   C: cru = ( 400, 800) * 400/ 800 = (200, 400)  future = (200, 400)
///
///   r_s  (future use of killed true failures)  = A's future = (600, 300)
///   r_w  consumed mode (work thrown away)      = C's cru    = (200, 400)
///   r_w  full mode (whole job must rerun)      = C's fru    = (400, 800)
///   r_total over all four jobs                 = (2200, 1700)
///
///   consumed: r_saving_cpu = (600-200)/2200    r_saving_mem = (300-400)/1700
///   full:     r_saving_cpu = (600-400)/2200    r_saving_mem = (300-800)/1700
///
///   confusion among running jobs {A, C}: tp=1, fp=1, fn=0, tn=0
///   -> recall 1, precision 1/2, f1 2/3; n_running 2, killed 1 right 1 wrong.
struct HandSavings {
  static constexpr std::int64_t t = 400;
  double r_total_cpu = 2200.0;
  double r_total_mem = 1700.0;
  double r_s_cpu = 600.0;
  double r_s_mem = 300.0;
  double r_w_cpu_consumed = 200.0;
  double r_w_mem_consumed = 400.0;
  double r_w_cpu_full = 400.0;
  double r_w_mem_full = 800.0;
  double r_saving_cpu_consumed = (600.0 - 200.0) / 2200.0;
  double r_saving_mem_consumed = (300.0 - 400.0) / 1700.0;
  double r_saving_cpu_full = (600.0 - 400.0) / 2200.0;
  double r_saving_mem_full = (300.0 - 800.0) / 1700.0;
  std::int64_t n_running = 2;
  std::int64_t n_killed_correct = 1;
  std::int64_t n_killed_wrong = 1;
  std::int64_t tp = 1, fp = 1, tn = 0, fn = 0;
  double recall = 1.0;
  double precision = 0.5;
  double f1 = 2.0 / 3.0;
};

/// The four jobs backing HandSavings, in A, B, C, D order.
inline RecordSet hand_savings_records() {
  auto job = [](std::int64_t id, int exit_status, std::int64_t wallclock, double cpu,
                double mem) {
    WorkloadRecord r = make_record(id, exit_status);
    r.wallclock = wallclock;
    r.end_time = r.start_time + wallclock;
    r.cpu = cpu;
    r.mem = mem;
    return r;
  };
  RecordSet rs;
  rs.records.push_back(job(1, 1, 1000, 1000.0, 500.0));  // A: fails
  rs.records.push_back(job(2, 1, 300, 600.0, 300.0));    // B: fails
  rs.records.push_back(job(3, 0, 800, 400.0, 800.0));    // C: succeeds
  rs.records.push_back(job(4, 0, 200, 200.0, 100.0));    // D: succeeds
  return rs;
}

}  // namespace wfp::test
