#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "learn_detail.hpp"
#include "wfp/model.hpp"
#include "wfp/numeric.hpp"

namespace wfp {

using nlohmann::json;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::gnb: return "gnb";
    case ModelKind::lr: return "lr";
    case ModelKind::lda: return "lda";
    case ModelKind::dt: return "dt";
    case ModelKind::rf: return "rf";
  }
  throw std::logic_error("unreachable model kind");
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "gnb") return ModelKind::gnb;
  if (s == "lr") return ModelKind::lr;
  if (s == "lda") return ModelKind::lda;
  if (s == "dt") return ModelKind::dt;
  if (s == "rf") return ModelKind::rf;
  throw std::invalid_argument("unknown model kind: " + s +
                              " (expected gnb|lr|lda|dt|rf)");
}

void ModelSpec::validate() const {
  if (!(lr_c > 0.0)) throw std::invalid_argument("model spec: lr_c must be > 0");
  if (lr_max_iters < 1) throw std::invalid_argument("model spec: lr_max_iters must be >= 1");
  if (!(lr_tolerance > 0.0)) throw std::invalid_argument("model spec: lr_tolerance must be > 0");
  if (rf_n_trees < 1) throw std::invalid_argument("model spec: rf_n_trees must be >= 1");
  if (dt_min_leaf < 1) throw std::invalid_argument("model spec: dt_min_leaf must be >= 1");
  if (dt_max_depth < 0) throw std::invalid_argument("model spec: dt_max_depth must be >= 0");
}

namespace detail {

GnbParams train_gaussian_nb(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();

  GnbParams p;
  std::array<Eigen::Index, 2> counts{0, 0};
  for (int c = 0; c < 2; ++c) {
    p.mean[c] = Eigen::VectorXd::Zero(d);
    p.var[c] = Eigen::VectorXd::Zero(d);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    p.mean[c] += X.row(i).transpose();
    ++counts[c];
  }
  for (int c = 0; c < 2; ++c) {
    if (counts[c] > 0) {
      p.present[c] = true;
      p.mean[c] /= static_cast<double>(counts[c]);
      p.log_prior[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    p.var[c].array() +=
        (X.row(i).transpose() - p.mean[c]).array().square();
  }

  // Variance smoothing: one-hot columns are constant within a class, and a
  // zero variance makes the Gaussian likelihood undefined. Add a small
  // fraction of the largest overall feature variance (population convention).
  const Eigen::VectorXd overall_mean = X.colwise().mean();
  double max_var = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double v = (X.col(j).array() - overall_mean(j)).square().sum() /
                     static_cast<double>(n);
    if (v > max_var) max_var = v;
  }
  const double epsilon = 1e-9 * (max_var > 0.0 ? max_var : 1.0);
  for (int c = 0; c < 2; ++c) {
    if (p.present[c]) {
      p.var[c] = p.var[c] / static_cast<double>(counts[c]);
      p.var[c].array() += epsilon;
    }
  }
  return p;
}

}  // namespace detail

TrainedModel train(const ModelSpec& spec, const Dataset& data) {
  spec.validate();
  if (data.rows.rows() == 0) throw std::invalid_argument("train: empty dataset");
  if (data.rows.rows() != static_cast<Eigen::Index>(data.labels.size())) {
    throw std::invalid_argument("train: row/label count mismatch");
  }
  if (static_cast<std::size_t>(data.rows.cols()) != data.schema.output_dimension) {
    throw std::invalid_argument(
        "train: dataset width does not match schema output_dimension");
  }

  bool has0 = false, has1 = false;
  for (int y : data.labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("train: labels must be 0 or 1");
    (y ? has1 : has0) = true;
  }
  if ((spec.kind == ModelKind::lr || spec.kind == ModelKind::lda) && !(has0 && has1)) {
    throw std::invalid_argument("train: " + to_string(spec.kind) +
                                " requires both classes in the training data");
  }

  TrainedModel m;
  m.spec = spec;
  m.schema_fingerprint = data.schema.fingerprint();
  m.input_dimension = data.rows.cols();

  const auto t0 = std::chrono::steady_clock::now();
  switch (spec.kind) {
    case ModelKind::gnb:
      m.params = detail::train_gaussian_nb(data.rows, data.labels);
      break;
    case ModelKind::lr:
      m.params = detail::train_logistic_regression(spec, data.rows, data.labels);
      break;
    case ModelKind::lda:
      m.params = detail::train_linear_discriminant(data.rows, data.labels);
      break;
    case ModelKind::dt:
      m.params = detail::train_decision_tree(spec, data.rows, data.labels);
      break;
    case ModelKind::rf:
      m.params = detail::train_forest(spec, data.rows, data.labels);
      break;
  }
  const auto t1 = std::chrono::steady_clock::now();
  m.train_seconds = std::chrono::duration<double>(t1 - t0).count();
  return m;
}

std::array<double, 2> gnb_class_posteriors(const TrainedModel& m, RowRef row) {
  const auto* p = std::get_if<GnbParams>(&m.params);
  if (!p) throw std::invalid_argument("gnb_class_posteriors: not a GNB model");
  if (row.size() != m.input_dimension) {
    throw std::invalid_argument("predict: row dimension mismatch");
  }
  if (!p->present[0] || !p->present[1]) {
    return p->present[1] ? std::array<double, 2>{0.0, 1.0}
                         : std::array<double, 2>{1.0, 0.0};
  }
  std::array<double, 2> ll;
  for (int c = 0; c < 2; ++c) {
    const auto diff = row.transpose().array() - p->mean[c].array();
    const auto var = p->var[c].array();
    ll[c] = p->log_prior[c] -
            0.5 * ((2.0 * M_PI * var).log() + diff.square() / var).sum();
  }
  const double hi = std::max(ll[0], ll[1]);
  const double e0 = std::exp(ll[0] - hi);
  const double e1 = std::exp(ll[1] - hi);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

namespace {

Prediction predict_linear(const LinearParams& p, RowRef row) {
  const double score = sigmoid(row.dot(p.weights.transpose()) + p.intercept);
  return {score > 0.5 ? 1 : 0, score};
}

Prediction predict_tree(const std::vector<TreeNode>& nodes, RowRef row) {
  const TreeNode& leaf =
      nodes[static_cast<std::size_t>(detail::route_to_leaf(nodes, row))];
  const double total = static_cast<double>(leaf.count0 + leaf.count1);
  const double score = static_cast<double>(leaf.count1) / total;
  return {leaf.count1 > leaf.count0 ? 1 : 0, score};
}

Prediction predict_forest(const ForestParams& p, RowRef row) {
  int votes = 0;
  for (const auto& tree : p.trees) votes += predict_tree(tree.nodes, row).label;
  const double score =
      static_cast<double>(votes) / static_cast<double>(p.trees.size());
  // An exact split vote keeps the job alive: killing is the costly action.
  return {score > 0.5 ? 1 : 0, score};
}

}  // namespace

Prediction predict(const TrainedModel& m, RowRef row) {
  if (row.size() != m.input_dimension) {
    throw std::invalid_argument("predict: row dimension mismatch (got " +
                                std::to_string(row.size()) + ", model expects " +
                                std::to_string(m.input_dimension) + ")");
  }
  switch (m.spec.kind) {
    case ModelKind::gnb: {
      const auto post = gnb_class_posteriors(m, row);
      return {post[1] > 0.5 ? 1 : 0, post[1]};
    }
    case ModelKind::lr:
    case ModelKind::lda:
      return predict_linear(std::get<LinearParams>(m.params), row);
    case ModelKind::dt:
      return predict_tree(std::get<DecisionTreeParams>(m.params).nodes, row);
    case ModelKind::rf:
      return predict_forest(std::get<ForestParams>(m.params), row);
  }
  throw std::logic_error("unreachable model kind");
}

std::vector<Prediction> predict_all(const TrainedModel& m, const Eigen::MatrixXd& X) {
  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.push_back(predict(m, X.row(i)));
  return out;
}

void check_fingerprint(const TrainedModel& m, const FeatureSchema& schema) {
  const std::string fp = schema.fingerprint();
  if (fp != m.schema_fingerprint) {
    throw std::runtime_error("schema fingerprint mismatch: model was trained with " +
                             m.schema_fingerprint + ", data is encoded with " + fp);
  }
}

namespace {

json spec_to_json(const ModelSpec& s) {
  return json{{"kind", to_string(s.kind)},
              {"lr_c", s.lr_c},
              {"lr_max_iters", s.lr_max_iters},
              {"lr_tolerance", s.lr_tolerance},
              {"dt_min_leaf", s.dt_min_leaf},
              {"dt_max_depth", s.dt_max_depth},
              {"rf_n_trees", s.rf_n_trees},
              {"rf_bootstrap", s.rf_bootstrap},
              {"rf_sqrt_features", s.rf_sqrt_features},
              {"seed", s.seed}};
}

ModelSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("model spec: expected a JSON object");
  static const std::vector<std::string> known = {
      "kind",        "lr_c",         "lr_max_iters",     "lr_tolerance", "dt_min_leaf",
      "dt_max_depth", "rf_n_trees",  "rf_bootstrap",     "rf_sqrt_features", "seed"};
  for (const auto& [key, unused] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("model spec: unknown key '" + key + "'");
    }
  }
  ModelSpec s;
  if (j.contains("kind")) s.kind = model_kind_from_string(j.at("kind").get<std::string>());
  s.lr_c = j.value("lr_c", s.lr_c);
  s.lr_max_iters = j.value("lr_max_iters", s.lr_max_iters);
  s.lr_tolerance = j.value("lr_tolerance", s.lr_tolerance);
  s.dt_min_leaf = j.value("dt_min_leaf", s.dt_min_leaf);
  s.dt_max_depth = j.value("dt_max_depth", s.dt_max_depth);
  s.rf_n_trees = j.value("rf_n_trees", s.rf_n_trees);
  s.rf_bootstrap = j.value("rf_bootstrap", s.rf_bootstrap);
  s.rf_sqrt_features = j.value("rf_sqrt_features", s.rf_sqrt_features);
  s.seed = j.value("seed", s.seed);
  s.validate();
  return s;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (const auto& x : a) v(i++) = x.get<double>();
  return v;
}

json tree_to_json(const DecisionTreeParams& t) {
  json nodes = json::array();
  for (const TreeNode& nd : t.nodes) {
    nodes.push_back(json::array(
        {nd.feature, nd.threshold, nd.left, nd.right, nd.count0, nd.count1}));
  }
  return json{{"nodes", nodes}};
}

DecisionTreeParams tree_from_json(const json& j) {
  DecisionTreeParams t;
  for (const auto& nd : j.at("nodes")) {
    if (!nd.is_array() || nd.size() != 6) {
      throw std::runtime_error("model file: malformed tree node");
    }
    t.nodes.push_back(TreeNode{nd[0].get<std::int32_t>(), nd[1].get<double>(),
                               nd[2].get<std::int32_t>(), nd[3].get<std::int32_t>(),
                               nd[4].get<std::int64_t>(), nd[5].get<std::int64_t>()});
  }
  if (t.nodes.empty()) throw std::runtime_error("model file: empty tree");
  return t;
}

constexpr int kModelFormatVersion = 1;

}  // namespace

void save_model(const TrainedModel& m, const std::filesystem::path& path) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["schema_fingerprint"] = m.schema_fingerprint;
  j["input_dimension"] = m.input_dimension;
  // Measured training time is deliberately not persisted: model files stay
  // byte-identical across reruns of the same seeded pipeline.
  j["spec"] = spec_to_json(m.spec);

  json params;
  switch (m.spec.kind) {
    case ModelKind::gnb: {
      const auto& p = std::get<GnbParams>(m.params);
      params = json{{"present", {p.present[0], p.present[1]}},
                    {"log_prior", {p.log_prior[0], p.log_prior[1]}},
                    {"mean", {vector_to_json(p.mean[0]), vector_to_json(p.mean[1])}},
                    {"var", {vector_to_json(p.var[0]), vector_to_json(p.var[1])}}};
      break;
    }
    case ModelKind::lr:
    case ModelKind::lda: {
      const auto& p = std::get<LinearParams>(m.params);
      params = json{{"weights", vector_to_json(p.weights)},
                    {"intercept", p.intercept},
                    {"converged", p.converged},
                    {"final_grad_norm", p.final_grad_norm},
                    {"iterations", p.iterations}};
      break;
    }
    case ModelKind::dt:
      params = tree_to_json(std::get<DecisionTreeParams>(m.params));
      break;
    case ModelKind::rf: {
      const auto& p = std::get<ForestParams>(m.params);
      json trees = json::array();
      for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
      params = json{{"tree_seeds", p.tree_seeds}, {"trees", std::move(trees)}};
      break;
    }
  }
  j["params"] = std::move(params);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump() << "\n";
  if (!out) throw std::runtime_error("short write: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("model file " + path.string() +
                             ": invalid JSON: " + e.what());
  }
  try {
    const int version = j.value("format_version", -1);
    if (version != kModelFormatVersion) {
      throw std::runtime_error("model file " + path.string() +
                               ": unsupported format_version " + std::to_string(version));
    }
    TrainedModel m;
    m.spec = spec_from_json(j.at("spec"));
    m.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
    m.input_dimension = j.at("input_dimension").get<Eigen::Index>();

    const json& params = j.at("params");
    switch (m.spec.kind) {
      case ModelKind::gnb: {
        GnbParams p;
        p.present = {params.at("present")[0].get<bool>(),
                     params.at("present")[1].get<bool>()};
        p.log_prior = {params.at("log_prior")[0].get<double>(),
                       params.at("log_prior")[1].get<double>()};
        p.mean = {vector_from_json(params.at("mean")[0]),
                  vector_from_json(params.at("mean")[1])};
        p.var = {vector_from_json(params.at("var")[0]),
                 vector_from_json(params.at("var")[1])};
        m.params = std::move(p);
        break;
      }
      case ModelKind::lr:
      case ModelKind::lda: {
        LinearParams p;
        p.weights = vector_from_json(params.at("weights"));
        p.intercept = params.at("intercept").get<double>();
        p.converged = params.value("converged", true);
        p.final_grad_norm = params.value("final_grad_norm", 0.0);
        p.iterations = params.value("iterations", 0);
        m.params = std::move(p);
        break;
      }
      case ModelKind::dt:
        m.params = tree_from_json(params);
        break;
      case ModelKind::rf: {
        ForestParams p;
        p.tree_seeds = params.at("tree_seeds").get<std::vector<std::uint64_t>>();
        for (const auto& t : params.at("trees")) p.trees.push_back(tree_from_json(t));
        if (p.trees.size() != static_cast<std::size_t>(m.spec.rf_n_trees)) {
          throw std::runtime_error("model file: tree count does not match rf_n_trees");
        }
        m.params = std::move(p);
        break;
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw std::runtime_error("model file " + path.string() +
                             ": missing or bad field: " + e.what());
  }
}

std::string model_spec_to_json_text(const ModelSpec& spec) {
  return spec_to_json(spec).dump(2) + "\n";
}

ModelSpec model_spec_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model spec: invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

}  // namespace wfp
