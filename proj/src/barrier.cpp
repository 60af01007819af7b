#include "mmnoma/barrier.hpp"

#include <cmath>
#include <limits>

#include "mmnoma/common.hpp"

namespace mmnoma {

namespace {

bool strictly_inside(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
  return ((b - A * x).array() > 0.0).all();
}

}  // namespace

BarrierResult barrier_minimize(const BarrierProblem& problem, const Eigen::VectorXd& x0,
                               const BarrierOptions& options) {
  const Eigen::MatrixXd& A = problem.A;
  const Eigen::VectorXd& b = problem.b;
  if (!strictly_inside(A, b, x0)) throw ModelError("barrier: start point is not strictly feasible");

  const int n = static_cast<int>(x0.size());
  const double m = static_cast<double>(A.rows());
  BarrierResult res;
  res.x = x0;
  double t = options.t0;

  Eigen::VectorXd grad(n), step(n);
  Eigen::MatrixXd hess(n, n);
  Eigen::VectorXd slack(A.rows()), inv(A.rows());
  Eigen::MatrixXd scaled(A.rows(), n);
  auto phi = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* h) {
    slack.noalias() = b - A * x;
    if ((slack.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
    double value = t * problem.evaluate(x, g, h) - slack.array().log().sum();
    if (g) {
      inv = slack.cwiseInverse();
      *g *= t;
      g->noalias() += A.transpose() * inv;
      scaled = inv.asDiagonal() * A;
      *h *= t;
      h->noalias() += scaled.transpose().lazyProduct(scaled);
    }
    return value;
  };

  while (true) {
    // Centering. Inside the quadratic region the Armijo test is below the
    // rounding noise of phi at large t, so take full steps there and stop once
    // the decrement no longer shrinks.
    double previous = std::numeric_limits<double>::infinity();
    while (res.newton_steps < options.max_newton_steps) {
      const double value = phi(res.x, &grad, &hess);
      step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (!(decrement > 2.0 * options.newton_tolerance)) break;
      const bool quadratic = decrement < 0.01;
      if (quadratic && decrement > 0.5 * previous) break;
      previous = decrement;
      ++res.newton_steps;
      double alpha = 1.0;
      Eigen::VectorXd trial = res.x + step;
      while (!strictly_inside(A, b, trial) && alpha > 1e-20) {
        alpha *= 0.5;
        trial = res.x + alpha * step;
      }
      while (!quadratic && phi(trial, nullptr, nullptr) > value - 0.25 * alpha * decrement &&
             alpha > 1e-20) {
        alpha *= 0.5;
        trial = res.x + alpha * step;
      }
      if (alpha <= 1e-20) break;
      res.x = trial;
      if (problem.evaluate(res.x, nullptr, nullptr) <= options.stop_value) {
        res.value = problem.evaluate(res.x, nullptr, nullptr);
        res.converged = true;
        return res;
      }
    }
    if (m / t < options.gap_tolerance) {
      res.converged = true;
      break;
    }
    if (res.newton_steps >= options.max_newton_steps) break;
    t *= options.mu;
  }
  res.value = problem.evaluate(res.x, nullptr, nullptr);
  return res;
}

SlackResult max_min_slack(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& x_guess, const BarrierOptions& options) {
  const int n = static_cast<int>(A.cols());
  // Variables z = (x, s); minimize s subject to A x - s <= b.
  BarrierProblem p;
  p.A.resize(A.rows(), n + 1);
  p.A << A, -Eigen::VectorXd::Ones(A.rows());
  p.b = b;
  p.evaluate = [n](const Eigen::VectorXd& z, Eigen::VectorXd* g, Eigen::MatrixXd* h) {
    if (g) {
      *g = Eigen::VectorXd::Zero(n + 1);
      (*g)(n) = 1.0;
      *h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    }
    return z(n);
  };
  Eigen::VectorXd z0(n + 1);
  z0.head(n) = x_guess;
  z0(n) = (A * x_guess - b).maxCoeff() + 1.0;
  const BarrierResult r = barrier_minimize(p, z0, options);
  return {r.x.head(n), -r.x(n)};
}

}  // namespace mmnoma
