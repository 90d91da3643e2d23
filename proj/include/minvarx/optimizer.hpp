#pragma once

#include <functional>

#include <Eigen/Dense>

namespace minvarx {

/// Objective callback. Fills f and g, and h when need_hessian is set. May
/// throw NumericalError when x lies outside the domain.
using ObjectiveFn = std::function<void(const Eigen::VectorXd& x, bool need_hessian, double& f,
                                       Eigen::VectorXd& g, Eigen::MatrixXd& h)>;

/// Value-preserving change of coordinates applied periodically (for example a
/// centralizer normalization). Must not change f.
using RenormalizeFn = std::function<void(Eigen::VectorXd& x)>;

struct MinimizeOptions {
  int max_iters = 500;
  double grad_tol = 1e-8;         // on the max-norm of the gradient
  int renormalize_every = 20;
  double divergence_bound = 1e8;  // on the max-abs entry of x after renormalization
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
};

/// Levenberg-damped Newton with a gradient-descent fallback.
MinimizeResult damped_newton(const ObjectiveFn& fn, Eigen::VectorXd x0,
                             const MinimizeOptions& opts, const RenormalizeFn& renorm = {});

/// BFGS with backtracking line search; the inverse-Hessian estimate is reset
/// after every renormalization.
MinimizeResult bfgs(const ObjectiveFn& fn, Eigen::VectorXd x0, const MinimizeOptions& opts,
                    const RenormalizeFn& renorm = {});

}  // namespace minvarx
