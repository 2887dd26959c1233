#include <cmath>
#include <deque>
#include <stdexcept>

#include <Eigen/Dense>

#include "learn_detail.hpp"
#include "wfp/model.hpp"
#include "wfp/numeric.hpp"

namespace wfp::detail {

// L2-regularized negative log-likelihood and its gradient. theta packs the
// weight vector in the first d entries and the (unpenalized) intercept last.
double lr_objective(const Eigen::MatrixXd& X, const std::vector<int>& labels, double c,
                    const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
  const Eigen::Index d = X.cols();
  const Eigen::Index n = X.rows();
  const auto w = theta.head(d);
  const double b = theta(d);

  Eigen::VectorXd z = X * w;
  z.array() += b;

  double f = 0.0;
  Eigen::VectorXd resid(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    f += softplus(z(i)) - (y ? z(i) : 0.0);
    resid(i) = sigmoid(z(i)) - static_cast<double>(y);
  }
  f += w.squaredNorm() / (2.0 * c);

  grad.resize(d + 1);
  grad.head(d) = X.transpose() * resid + w / c;
  grad(d) = resid.sum();
  return f;
}

LinearParams train_logistic_regression(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                       const std::vector<int>& labels) {
  const Eigen::Index d = X.cols();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd grad, new_grad;
  double f = lr_objective(X, labels, spec.lr_c, theta, grad);

  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  std::deque<Pair> history;  // newest at the back
  constexpr std::size_t kHistory = 10;
  constexpr double kArmijo = 1e-4;

  LinearParams out;
  out.converged = false;
  int iter = 0;
  for (; iter < spec.lr_max_iters; ++iter) {
    const double gnorm = grad.norm();
    if (gnorm <= spec.lr_tolerance) {
      out.converged = true;
      break;
    }

    // Two-loop recursion for the L-BFGS direction.
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      alpha[k] = history[k].rho * history[k].s.dot(q);
      q -= alpha[k] * history[k].y;
    }
    if (!history.empty()) {
      const Pair& last = history.back();
      q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const double beta = history[k].rho * history[k].y.dot(q);
      q += (alpha[k] - beta) * history[k].s;
    }
    Eigen::VectorXd dir = -q;

    double gd = grad.dot(dir);
    if (gd >= 0.0) {  // not a descent direction; restart from steepest descent
      history.clear();
      dir = -grad;
      gd = -grad.squaredNorm();
    }

    // Backtracking line search (Armijo), which also guarantees the monotone
    // loss decrease the optimizer contract promises.
    double step = 1.0;
    double new_f = 0.0;
    Eigen::VectorXd new_theta;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls) {
      new_theta = theta + step * dir;
      new_f = lr_objective(X, labels, spec.lr_c, new_theta, new_grad);
      if (new_f <= f + kArmijo * step * gd) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled; report the final gradient norm below

    Eigen::VectorXd s = new_theta - theta;
    Eigen::VectorXd y = new_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12) {
      history.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (history.size() > kHistory) history.pop_front();
    }
    theta = std::move(new_theta);
    grad = new_grad;
    f = new_f;
  }

  out.weights = theta.head(d);
  out.intercept = theta(d);
  out.final_grad_norm = grad.norm();
  out.iterations = iter;
  if (out.final_grad_norm <= spec.lr_tolerance) out.converged = true;
  return out;
}

LinearParams train_linear_discriminant(const Eigen::MatrixXd& X,
                                       const std::vector<int>& labels) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();

  double n0 = 0, n1 = 0;
  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(d), mu1 = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[static_cast<std::size_t>(i)]) {
      mu1 += X.row(i).transpose();
      n1 += 1;
    } else {
      mu0 += X.row(i).transpose();
      n0 += 1;
    }
  }
  mu0 /= n0;
  mu1 /= n1;

  // Pooled within-class covariance via the total scatter identity:
  // sum_c sum_{i in c} (x - mu_c)(x - mu_c)^T = X^T X - n0 mu0 mu0^T - n1 mu1 mu1^T.
  Eigen::MatrixXd S = X.transpose() * X;
  S.noalias() -= n0 * (mu0 * mu0.transpose());
  S.noalias() -= n1 * (mu1 * mu1.transpose());
  S /= static_cast<double>(n - 2);

  // One-hot blocks make S rank-deficient; a least-squares (minimum-norm)
  // solve of S w = mu1 - mu0 is the discriminant direction.
  LinearParams out;
  out.weights = S.completeOrthogonalDecomposition().solve(mu1 - mu0);
  out.intercept = -0.5 * out.weights.dot(mu0 + mu1) + std::log(n1 / n0);
  out.converged = true;
  out.final_grad_norm = 0.0;
  out.iterations = 0;
  return out;
}

}  // namespace wfp::detail
