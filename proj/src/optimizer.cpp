#include "minvarx/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minvarx/errors.hpp"

namespace minvarx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Evaluates fn and maps domain failures to +inf.
bool try_eval(const ObjectiveFn& fn, const Eigen::VectorXd& x, bool hess, double& f,
              Eigen::VectorXd& g, Eigen::MatrixXd& h) {
  try {
    fn(x, hess, f, g, h);
  } catch (const NumericalError&) {
    f = kInf;
    return false;
  }
  if (!std::isfinite(f) || !g.allFinite()) {
    f = kInf;
    return false;
  }
  return true;
}

bool acceptable(double f_new, double f_old, double g_new, double g_old) {
  if (f_new < f_old) return true;
  return f_new <= f_old + 1e-13 * (1.0 + std::abs(f_old)) && g_new < g_old;
}

// Armijo backtracking along -g. Returns false when no decrease is found.
bool gradient_step(const ObjectiveFn& fn, Eigen::VectorXd& x, double& f, Eigen::VectorXd& g) {
  const double gg = g.squaredNorm();
  if (!(gg > 0.0)) return false;
  double alpha = 1.0 / std::max(1.0, std::sqrt(gg));
  Eigen::VectorXd g_new;
  Eigen::MatrixXd unused;
  for (int tries = 0; tries < 60; ++tries, alpha *= 0.5) {
    const Eigen::VectorXd trial = x - alpha * g;
    double f_new;
    if (!try_eval(fn, trial, false, f_new, g_new, unused)) continue;
    if (f_new <= f - 1e-4 * alpha * gg) {
      x = trial;
      f = f_new;
      g = g_new;
      return true;
    }
  }
  return false;
}

}  // namespace

MinimizeResult damped_newton(const ObjectiveFn& fn, Eigen::VectorXd x0,
                             const MinimizeOptions& opts, const RenormalizeFn& renorm) {
  MinimizeResult res;
  Eigen::VectorXd x = std::move(x0);
  double f;
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  fn(x, true, f, g, h);

  const Eigen::Index n = x.size();
  double lambda = 1e-6 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (max_abs(g) <= opts.grad_tol) break;
    if (renorm && opts.renormalize_every > 0 && it > 0 && it % opts.renormalize_every == 0) {
      renorm(x);
      fn(x, true, f, g, h);
      if (max_abs(x) > opts.divergence_bound) {
        res.diverged = true;
        break;
      }
      if (max_abs(g) <= opts.grad_tol) break;
    }

    const double g_old = max_abs(g);
    bool stepped = false;
    Eigen::VectorXd g_new;
    Eigen::MatrixXd unused;
    while (lambda < 1e12) {
      Eigen::LLT<Eigen::MatrixXd> llt(h + lambda * Eigen::MatrixXd::Identity(n, n));
      if (llt.info() != Eigen::Success) {
        lambda = std::max(4.0 * lambda, 1e-10);
        continue;
      }
      const Eigen::VectorXd step = llt.solve(-g);
      const Eigen::VectorXd trial = x + step;
      double f_new;
      if (try_eval(fn, trial, false, f_new, g_new, unused) &&
          acceptable(f_new, f, max_abs(g_new), g_old)) {
        x = trial;
        lambda = std::max(lambda / 3.0, 1e-14);
        stepped = true;
        break;
      }
      lambda = std::max(4.0 * lambda, 1e-10);
    }
    if (!stepped) {
      lambda = 1e-6 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
      if (!gradient_step(fn, x, f, g)) break;
    }
    fn(x, true, f, g, h);
    if (!std::isfinite(f)) throw NumericalError("optimizer: objective became non-finite");
  }

  if (renorm) {
    renorm(x);
    fn(x, false, f, g, h);
  }
  res.x = std::move(x);
  res.f = f;
  res.grad_norm = max_abs(g);
  res.iterations = it;
  if (max_abs(res.x) > opts.divergence_bound) res.diverged = true;
  res.converged = !res.diverged && res.grad_norm <= opts.grad_tol;
  return res;
}

MinimizeResult bfgs(const ObjectiveFn& fn, Eigen::VectorXd x0, const MinimizeOptions& opts,
                    const RenormalizeFn& renorm) {
  MinimizeResult res;
  Eigen::VectorXd x = std::move(x0);
  const Eigen::Index n = x.size();
  double f;
  Eigen::VectorXd g;
  Eigen::MatrixXd unused;
  fn(x, false, f, g, unused);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);

  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (max_abs(g) <= opts.grad_tol) break;
    if (renorm && opts.renormalize_every > 0 && it > 0 && it % opts.renormalize_every == 0) {
      renorm(x);
      fn(x, false, f, g, unused);
      hinv.setIdentity();
      if (max_abs(x) > opts.divergence_bound) {
        res.diverged = true;
        break;
      }
    }
    Eigen::VectorXd dir = -hinv * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double alpha = 1.0;
    bool stepped = false;
    Eigen::VectorXd g_new;
    for (int tries = 0; tries < 60; ++tries, alpha *= 0.5) {
      const Eigen::VectorXd trial = x + alpha * dir;
      double f_new;
      if (!try_eval(fn, trial, false, f_new, g_new, unused)) continue;
      if (f_new <= f + 1e-4 * alpha * slope ||
          acceptable(f_new, f, max_abs(g_new), max_abs(g))) {
        const Eigen::VectorXd s = trial - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
          const double rho = 1.0 / sy;
          const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
          hinv = v * hinv * v.transpose() + rho * s * s.transpose();
        }
        x = trial;
        f = f_new;
        g = g_new;
        stepped = true;
        break;
      }
    }
    if (!stepped) {
      if (hinv.isIdentity()) break;
      hinv.setIdentity();
    }
  }

  if (renorm) {
    renorm(x);
    fn(x, false, f, g, unused);
  }
  res.x = std::move(x);
  res.f = f;
  res.grad_norm = max_abs(g);
  res.iterations = it;
  if (max_abs(res.x) > opts.divergence_bound) res.diverged = true;
  res.converged = !res.diverged && res.grad_norm <= opts.grad_tol;
  return res;
}

}  // namespace minvarx
