#include "doctest.h"

#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "wfp/model.hpp"
#include "wfp/numeric.hpp"
#include "wfp/rng.hpp"

#include "learn_detail.hpp"
#include "test_util.hpp"

using namespace wfp;
using wfp::test::make_dataset;
using wfp::test::random_dataset;

namespace {

ModelSpec lr_spec(double c = 0.1) {
  ModelSpec s;
  s.kind = ModelKind::lr;
  s.lr_c = c;
  return s;
}

/// Central finite difference of the objective, the independent gradient oracle.
Eigen::VectorXd fd_gradient(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                            double c, const Eigen::VectorXd& theta) {
  const double h = 1e-6;
  Eigen::VectorXd g(theta.size());
  Eigen::VectorXd probe = theta;
  Eigen::VectorXd scratch(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    probe(j) = theta(j) + h;
    const double up = detail::lr_objective(X, labels, c, probe, scratch);
    probe(j) = theta(j) - h;
    const double down = detail::lr_objective(X, labels, c, probe, scratch);
    probe(j) = theta(j);
    g(j) = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("linear");

TEST_CASE("the logistic objective matches a hand computation at zero") {
  // One row x = [1], label 1, theta = 0: f = softplus(0) = ln 2, and the
  // residual sigmoid(0) - 1 = -1/2 flows into both gradient slots.
  Eigen::MatrixXd X(1, 1);
  X << 1.0;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd grad(2);
  const double f = detail::lr_objective(X, {1}, 1.0, theta, grad);
  CHECK(f == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(grad(0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(grad(1) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("the L2 term penalizes weights but not the intercept") {
  Eigen::MatrixXd X(1, 1);
  X << 0.0;  // kills the data term's dependence on w
  Eigen::VectorXd theta(2);
  theta << 3.0, 0.0;
  Eigen::VectorXd grad(2);
  const double c = 0.5;
  const double f = detail::lr_objective(X, {1}, c, theta, grad);
  // f = softplus(0) - 0 + w^2/(2c); d/dw = w/c; the intercept slot only sees
  // the data residual.
  CHECK(f == doctest::Approx(std::log(2.0) + 9.0 / (2.0 * c)).epsilon(1e-12));
  CHECK(grad(0) == doctest::Approx(3.0 / c).epsilon(1e-12));
  CHECK(grad(1) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("the analytic gradient matches central finite differences") {
  Rng rng(314);
  const Dataset ds = random_dataset(60, 4, 555);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd theta(5);
    for (Eigen::Index j = 0; j < 5; ++j) theta(j) = rng.uniform(-1.5, 1.5);
    Eigen::VectorXd grad(5);
    detail::lr_objective(ds.rows, ds.labels, 0.25, theta, grad);
    const Eigen::VectorXd fd = fd_gradient(ds.rows, ds.labels, 0.25, theta);
    const double rel = (grad - fd).norm() / std::max(1.0, fd.norm());
    CAPTURE(rep);
    CHECK(rel <= 1e-5);
  }
}

TEST_CASE("logistic regression separates an easy problem") {
  const Dataset ds = random_dataset(400, 3, 777);
  const TrainedModel m = train(lr_spec(1.0), ds);
  const auto& p = std::get<LinearParams>(m.params);
  CHECK(p.converged);
  CHECK(p.final_grad_norm <= 1e-6);
  CHECK(p.iterations > 0);
  CHECK(p.iterations <= 1000);

  const auto preds = predict_all(m, ds.rows);
  std::int64_t correct = 0;
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    correct += preds[static_cast<std::size_t>(i)].label == ds.labels[static_cast<std::size_t>(i)];
  }
  // The planted rule only pins the tails of x0; the middle 60% of rows are
  // label noise, capping achievable accuracy near 0.76. Demand clearly
  // better than chance, not perfection.
  CHECK(static_cast<double>(correct) / static_cast<double>(ds.size()) > 0.70);
}

TEST_CASE("with crushing regularization the intercept recovers the base rate") {
  // Strong penalty (tiny c) forces w ~ 0; the free intercept then must match
  // the empirical positive rate through the sigmoid.
  Rng rng(31);
  const Eigen::Index n = 3000;
  Eigen::MatrixXd X(n, 2);
  std::vector<int> y(static_cast<std::size_t>(n));
  double rate = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = rng.uniform(-1.0, 1.0);
    X(i, 1) = rng.uniform(-1.0, 1.0);
    y[static_cast<std::size_t>(i)] = rng.bernoulli(0.7) ? 1 : 0;
    rate += y[static_cast<std::size_t>(i)];
  }
  rate /= static_cast<double>(n);

  const TrainedModel m = train(lr_spec(1e-7), make_dataset(std::move(X), std::move(y)));
  const auto& p = std::get<LinearParams>(m.params);
  CHECK(p.weights.norm() < 1e-2);
  CHECK(sigmoid(p.intercept) == doctest::Approx(rate).epsilon(1e-3));
}

TEST_CASE("logistic regression training is deterministic") {
  const Dataset ds = random_dataset(100, 3, 888);
  const auto a = std::get<LinearParams>(train(lr_spec(), ds).params);
  const auto b = std::get<LinearParams>(train(lr_spec(), ds).params);
  CHECK((a.weights.array() == b.weights.array()).all());
  CHECK(a.intercept == b.intercept);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("linear discriminant matches the closed form on a small example") {
  // Two tilted blobs; recompute the pooled-scatter solve directly.
  Eigen::MatrixXd X(6, 2);
  X << 0.0, 0.0,
       1.0, 0.5,
       0.5, 1.0,
       4.0, 4.0,
       5.0, 4.5,
       4.5, 5.5;
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};

  Eigen::Vector2d mu0 = (X.row(0) + X.row(1) + X.row(2)).transpose() / 3.0;
  Eigen::Vector2d mu1 = (X.row(3) + X.row(4) + X.row(5)).transpose() / 3.0;
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 6; ++i) {
    const Eigen::Vector2d mu = y[static_cast<std::size_t>(i)] ? mu1 : mu0;
    const Eigen::Vector2d d = X.row(i).transpose() - mu;
    scatter += d * d.transpose();
  }
  const Eigen::Matrix2d pooled = scatter / (6.0 - 2.0);
  const Eigen::Vector2d w = pooled.fullPivLu().solve(mu1 - mu0);
  const double b = -0.5 * w.dot(mu0 + mu1) + std::log(3.0 / 3.0);

  ModelSpec spec;
  spec.kind = ModelKind::lda;
  const TrainedModel m = train(spec, make_dataset(X, y));
  const auto& p = std::get<LinearParams>(m.params);
  REQUIRE(p.weights.size() == 2);
  CHECK(p.weights(0) == doctest::Approx(w(0)).epsilon(1e-9));
  CHECK(p.weights(1) == doctest::Approx(w(1)).epsilon(1e-9));
  CHECK(p.intercept == doctest::Approx(b).epsilon(1e-9));

  // The blobs are far apart: training accuracy must be perfect.
  const auto preds = predict_all(m, X);
  for (std::size_t i = 0; i < 6; ++i) CHECK(preds[i].label == y[i]);
}

TEST_CASE("the LDA intercept carries the class-prior log ratio") {
  // Same geometry, unbalanced priors: only ln(n1/n0) moves the intercept.
  Eigen::MatrixXd X(6, 1);
  X << -1.0, -1.2, -0.8, -1.1, 1.0, 1.2;
  const std::vector<int> y = {0, 0, 0, 0, 1, 1};
  ModelSpec spec;
  spec.kind = ModelKind::lda;
  const TrainedModel m = train(spec, make_dataset(X, y));
  const auto& p = std::get<LinearParams>(m.params);

  const double mu0 = (-1.0 - 1.2 - 0.8 - 1.1) / 4.0;
  const double mu1 = (1.0 + 1.2) / 2.0;
  double scatter = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    const double mu = y[i] ? mu1 : mu0;
    scatter += (X(static_cast<Eigen::Index>(i), 0) - mu) * (X(static_cast<Eigen::Index>(i), 0) - mu);
  }
  const double pooled = scatter / 4.0;
  const double w = (mu1 - mu0) / pooled;
  const double b = -0.5 * w * (mu0 + mu1) + std::log(2.0 / 4.0);
  CHECK(p.weights(0) == doctest::Approx(w).epsilon(1e-9));
  CHECK(p.intercept == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("LDA tolerates singular scatter through the minimum-norm solve") {
  // Duplicated feature makes the pooled scatter rank one.
  Eigen::MatrixXd X(8, 2);
  for (int i = 0; i < 8; ++i) {
    X(i, 0) = i < 4 ? -1.0 - 0.1 * i : 1.0 + 0.1 * i;
    X(i, 1) = X(i, 0);
  }
  const std::vector<int> y = {0, 0, 0, 0, 1, 1, 1, 1};
  ModelSpec spec;
  spec.kind = ModelKind::lda;
  const TrainedModel m = train(spec, make_dataset(X, y));
  const auto& p = std::get<LinearParams>(m.params);
  CHECK(std::isfinite(p.weights(0)));
  CHECK(std::isfinite(p.weights(1)));
  CHECK(std::isfinite(p.intercept));
  const auto preds = predict_all(m, X);
  for (std::size_t i = 0; i < 8; ++i) CHECK(preds[i].label == y[i]);
}

TEST_SUITE_END();
