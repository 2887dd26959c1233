#pragma once

// Internal seams between the learn translation units; not installed.

#include <vector>

#include "wfp/model.hpp"

namespace wfp::detail {

DecisionTreeParams train_decision_tree(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                       const std::vector<int>& labels);
ForestParams train_forest(const ModelSpec& spec, const Eigen::MatrixXd& X,
                          const std::vector<int>& labels);
int route_to_leaf(const std::vector<TreeNode>& nodes, RowRef row);

LinearParams train_logistic_regression(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                       const std::vector<int>& labels);

/// L2-regularized logistic negative log-likelihood and gradient; theta packs
/// the weights first and the unpenalized intercept last. Exposed so the test
/// suite can difference the exact objective the optimizer minimizes.
double lr_objective(const Eigen::MatrixXd& X, const std::vector<int>& labels, double c,
                    const Eigen::VectorXd& theta, Eigen::VectorXd& grad);
LinearParams train_linear_discriminant(const Eigen::MatrixXd& X,
                                       const std::vector<int>& labels);
GnbParams train_gaussian_nb(const Eigen::MatrixXd& X, const std::vector<int>& labels);

}  // namespace wfp::detail
