#pragma once

#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace mmnoma {

/// Smooth convex objective on {x : A x < b}. `evaluate` fills the value,
/// gradient and Hessian at x; it is only called at strictly feasible points.
struct BarrierProblem {
  std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess)>
      evaluate;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

struct BarrierOptions {
  double t0 = 1.0;
  double mu = 30.0;
  double gap_tolerance = 1e-9;  // stop when (#constraints) / t falls below this
  double newton_tolerance = 1e-12;
  int max_newton_steps = 200;
  /// Stop as soon as the objective drops to this value.
  double stop_value = -std::numeric_limits<double>::infinity();
};

struct BarrierResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int newton_steps = 0;
  bool converged = false;
};

/// Log-barrier interior-point method with damped Newton centering steps.
/// `x0` must satisfy A x0 < b strictly.
BarrierResult barrier_minimize(const BarrierProblem& problem, const Eigen::VectorXd& x0,
                               const BarrierOptions& options = {});

/// Largest s* such that some x satisfies A x + s* <= b, with that x. Rows
/// should be scaled comparably (e.g. unit norm) for s* to be meaningful.
struct SlackResult {
  Eigen::VectorXd x;
  double slack = 0.0;
};

SlackResult max_min_slack(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& x_guess, const BarrierOptions& options = {});

}  // namespace mmnoma
