#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "wfp/features.hpp"

namespace wfp {

enum class ModelKind { gnb, lr, lda, dt, rf };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct ModelSpec {
  ModelKind kind = ModelKind::rf;

  // Logistic regression: L2 penalty with inverse strength C, gradient-based
  // fit stopped at the gradient-norm tolerance or the iteration cap.
  double lr_c = 0.1;
  int lr_max_iters = 1000;
  double lr_tolerance = 1e-6;

  // Trees. dt_max_depth = 0 means unlimited.
  int dt_min_leaf = 1;
  int dt_max_depth = 0;

  // Forest: bootstrap resamples and ceil(sqrt(d)) features per split.
  int rf_n_trees = 100;
  bool rf_bootstrap = true;
  bool rf_sqrt_features = true;  // false: every split sees all features

  std::uint64_t seed = 1;

  void validate() const;
};

std::string model_spec_to_json_text(const ModelSpec& spec);
ModelSpec model_spec_from_json_text(const std::string& text);

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

/// Gini impurity 1 - sum(p_i^2) over the class counts. Throws on all-zero.
double gini_impurity(std::span<const std::int64_t> class_counts);

/// Best (feature, midpoint-threshold) split of the given rows, maximizing
/// impurity decrease; ties break to the lower feature index, then the lower
/// threshold. Returns nullopt when no split strictly decreases impurity.
/// `labels` is indexed by absolute row id; `rows` selects the subset.
std::optional<Split> best_split(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                                std::span<const int> rows,
                                std::span<const int> candidate_features);

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int64_t count0 = 0;  // training labels that reached this node
  std::int64_t count1 = 0;
};

struct DecisionTreeParams {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestParams {
  std::vector<DecisionTreeParams> trees;
  std::vector<std::uint64_t> tree_seeds;
};

struct GnbParams {
  std::array<bool, 2> present{false, false};
  std::array<double, 2> log_prior{0.0, 0.0};
  std::array<Eigen::VectorXd, 2> mean;
  std::array<Eigen::VectorXd, 2> var;  // smoothed, strictly positive
};

struct LinearParams {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  bool converged = true;       // LR only; LDA is a direct solve
  double final_grad_norm = 0;  // LR diagnostic
  int iterations = 0;
};

struct TrainedModel {
  ModelSpec spec;
  std::string schema_fingerprint;
  Eigen::Index input_dimension = 0;
  double train_seconds = 0.0;
  std::variant<GnbParams, LinearParams, DecisionTreeParams, ForestParams> params;
};

struct Prediction {
  int label = 0;        // 1 = predicted failure
  double score = 0.0;   // failure-class probability / vote fraction
};

using RowRef = Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

TrainedModel train(const ModelSpec& spec, const Dataset& data);

Prediction predict(const TrainedModel& m, RowRef row);
std::vector<Prediction> predict_all(const TrainedModel& m, const Eigen::MatrixXd& X);

/// Normalized class posteriors {P(success|x), P(failure|x)} for a GNB model.
std::array<double, 2> gnb_class_posteriors(const TrainedModel& m, RowRef row);

void save_model(const TrainedModel& m, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

/// Throws when the schema the data was encoded with is not the schema the
/// model was trained on.
void check_fingerprint(const TrainedModel& m, const FeatureSchema& schema);

}  // namespace wfp
