#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "learn_detail.hpp"
#include "wfp/model.hpp"
#include "wfp/rng.hpp"

namespace wfp {

double gini_impurity(std::span<const std::int64_t> class_counts) {
  std::int64_t total = 0;
  for (std::int64_t c : class_counts) {
    if (c < 0) throw std::invalid_argument("gini_impurity: negative class count");
    total += c;
  }
  if (total == 0) throw std::invalid_argument("gini_impurity: all-zero class counts");
  double acc = 0.0;
  for (std::int64_t c : class_counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    acc += p * p;
  }
  return 1.0 - acc;
}

namespace {

// Midpoint of two consecutive distinct values, nudged down to the lower value
// if rounding lands on the upper one, so `x <= threshold` always routes the
// lower value left and the upper value right.
double split_threshold(double lo, double hi) {
  const double m = 0.5 * (lo + hi);
  return m < hi ? m : lo;
}

struct BestTracker {
  std::optional<Split> best;

  void consider(int feature, double threshold, double decrease) {
    if (decrease <= 0.0) return;
    if (!best || decrease > best->impurity_decrease ||
        (decrease == best->impurity_decrease &&
         (feature < best->feature ||
          (feature == best->feature && threshold < best->threshold)))) {
      best = Split{feature, threshold, decrease};
    }
  }
};

}  // namespace

std::optional<Split> best_split(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                                std::span<const int> rows,
                                std::span<const int> candidate_features) {
  const std::size_t n = rows.size();
  if (n < 2) return std::nullopt;

  std::int64_t c1 = 0;
  for (int r : rows) c1 += labels[static_cast<std::size_t>(r)];
  const std::int64_t c0 = static_cast<std::int64_t>(n) - c1;
  if (c0 == 0 || c1 == 0) return std::nullopt;  // pure: nothing to gain

  const std::int64_t parent_counts[2] = {c0, c1};
  const double parent = gini_impurity(parent_counts);
  const double dn = static_cast<double>(n);

  BestTracker tracker;
  std::vector<std::pair<double, int>> vals;

  auto consider_counts = [&](int f, double thr, std::int64_t l0, std::int64_t l1) {
    const std::int64_t left[2] = {l0, l1};
    const std::int64_t right[2] = {c0 - l0, c1 - l1};
    const double ln = static_cast<double>(l0 + l1);
    const double rn = static_cast<double>(right[0] + right[1]);
    const double children =
        (ln / dn) * gini_impurity(left) + (rn / dn) * gini_impurity(right);
    tracker.consider(f, thr, parent - children);
  };

  for (int f : candidate_features) {
    double lo = X(rows[0], f), hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      const double v = X(rows[i], f);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    if (lo == hi) continue;

    // One-hot and other two-valued columns: a counting pass replaces the sort.
    bool has_middle = false;
    std::int64_t lo0 = 0, lo1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = X(rows[i], f);
      if (v == lo) {
        labels[static_cast<std::size_t>(rows[i])] ? ++lo1 : ++lo0;
      } else if (v != hi) {
        has_middle = true;
        break;
      }
    }
    if (!has_middle) {
      consider_counts(f, split_threshold(lo, hi), lo0, lo1);
      continue;
    }

    vals.clear();
    vals.reserve(n);
    for (int r : rows) vals.emplace_back(X(r, f), labels[static_cast<std::size_t>(r)]);
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::int64_t l0 = 0, l1 = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      vals[i].second ? ++l1 : ++l0;
      if (vals[i].first < vals[i + 1].first) {
        consider_counts(f, split_threshold(vals[i].first, vals[i + 1].first), l0, l1);
      }
    }
  }
  return tracker.best;
}

namespace detail {

// Iterative preorder tree growth. An explicit work stack (rather than
// recursion) keeps memory bounded on degenerate deep chains; node indices and
// RNG draw order are identical to the recursive formulation.
DecisionTreeParams grow_tree(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                             std::vector<int> idx, int min_leaf, int max_depth,
                             Rng* rng, int mtry) {
  const int d = static_cast<int>(X.cols());
  std::vector<int> all_features(static_cast<std::size_t>(d));
  std::iota(all_features.begin(), all_features.end(), 0);
  std::vector<int> pool = all_features;  // shuffled in place across nodes
  std::vector<int> candidates;
  std::vector<int> scratch;

  DecisionTreeParams tree;

  struct Item {
    int begin, end, depth, parent;
    bool is_left;
  };
  std::vector<Item> stack;
  stack.push_back({0, static_cast<int>(idx.size()), 0, -1, false});

  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();

    std::int64_t c1 = 0;
    for (int i = it.begin; i < it.end; ++i) c1 += labels[static_cast<std::size_t>(idx[i])];
    const int n = it.end - it.begin;
    const std::int64_t c0 = n - c1;

    const int me = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, c0, c1});
    if (it.parent >= 0) {
      (it.is_left ? tree.nodes[it.parent].left : tree.nodes[it.parent].right) = me;
    }

    if (c0 == 0 || c1 == 0 || n < 2 || n < 2 * min_leaf) continue;
    if (max_depth > 0 && it.depth >= max_depth) continue;

    std::optional<Split> split;
    const std::span<const int> rows(idx.data() + it.begin, static_cast<std::size_t>(n));
    if (rng && mtry < d) {
      for (int i = 0; i < mtry; ++i) {
        const int j = i + static_cast<int>(rng->below(static_cast<std::uint64_t>(d - i)));
        std::swap(pool[i], pool[j]);
      }
      candidates.assign(pool.begin(), pool.begin() + mtry);
      std::sort(candidates.begin(), candidates.end());
      split = best_split(X, labels, rows, candidates);
    } else {
      split = best_split(X, labels, rows, all_features);
    }
    if (!split) continue;

    // Stable partition: rows with value <= threshold keep their order on the
    // left, the rest on the right.
    scratch.clear();
    int w = it.begin;
    for (int i = it.begin; i < it.end; ++i) {
      const int r = idx[i];
      if (X(r, split->feature) <= split->threshold) {
        idx[w++] = r;
      } else {
        scratch.push_back(r);
      }
    }
    std::copy(scratch.begin(), scratch.end(), idx.begin() + w);
    const int mid = w;
    if (mid - it.begin < min_leaf || it.end - mid < min_leaf) continue;

    tree.nodes[me].feature = split->feature;
    tree.nodes[me].threshold = split->threshold;
    // Right pushed first so the left child is processed (and numbered) first.
    stack.push_back({mid, it.end, it.depth + 1, me, false});
    stack.push_back({it.begin, mid, it.depth + 1, me, true});
  }
  return tree;
}

int route_to_leaf(const std::vector<TreeNode>& nodes, RowRef row) {
  int cur = 0;
  while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(cur)];
    cur = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return cur;
}

DecisionTreeParams train_decision_tree(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                       const std::vector<int>& labels) {
  std::vector<int> idx(static_cast<std::size_t>(X.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  return grow_tree(X, labels, std::move(idx), spec.dt_min_leaf, spec.dt_max_depth,
                   nullptr, static_cast<int>(X.cols()));
}

ForestParams train_forest(const ModelSpec& spec, const Eigen::MatrixXd& X,
                          const std::vector<int>& labels) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  const int mtry =
      spec.rf_sqrt_features
          ? std::min(d, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)))))
          : d;

  ForestParams forest;
  forest.trees.reserve(static_cast<std::size_t>(spec.rf_n_trees));
  for (int t = 0; t < spec.rf_n_trees; ++t) {
    const std::uint64_t ts = derive_seed(spec.seed, "tree:" + std::to_string(t));
    forest.tree_seeds.push_back(ts);
    Rng rng(ts);
    std::vector<int> idx(static_cast<std::size_t>(n));
    if (spec.rf_bootstrap) {
      for (int i = 0; i < n; ++i) {
        idx[static_cast<std::size_t>(i)] =
            static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      }
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }
    Rng* node_rng = spec.rf_sqrt_features ? &rng : nullptr;
    forest.trees.push_back(grow_tree(X, labels, std::move(idx), spec.dt_min_leaf,
                                     spec.dt_max_depth, node_rng, mtry));
  }
  return forest;
}

}  // namespace detail

}  // namespace wfp
