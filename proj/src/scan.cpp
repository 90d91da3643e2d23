#include "minvarx/scan.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "minvarx/errors.hpp"
#include "minvarx/optimizer.hpp"

namespace minvarx {

int scan_tangent_count(const StructureParams& psi, int m) {
  if (m != 2) throw StructureError("scan: only m = 2 is supported");
  const auto& groups = psi.groups();
  for (const auto& g : groups) {
    if (g.sub_rank != 1) throw StructureError("scan: every sub-rank must be 1");
  }
  if (groups.size() == 1) return groups[0].exponent - 1;
  if (groups.size() == 2) return groups[0].exponent - groups[1].exponent - 1;
  throw StructureError("scan: unsupported structure " + psi.to_string());
}

BlockMatrixG scan_g(const StructureParams& psi, double t, const Eigen::VectorXd& c) {
  const int n_tan = scan_tangent_count(psi, 2);
  if (c.size() != n_tan) throw StructureError("scan: wrong number of tangent coefficients");
  const Eigen::RowVector2d v(std::cos(t), std::sin(t));
  const Eigen::RowVector2d w(-std::sin(t), std::cos(t));
  BlockMatrixG g = BlockMatrixG::zeros(psi, 2);
  const auto& groups = psi.groups();
  const int p = groups[0].exponent;
  g.block(p, 0) = v;
  if (groups.size() == 2) g.block(groups[1].exponent, 0) = w;
  for (int l = 1; l <= n_tan; ++l) g.block(p, l) = c(l - 1) * w;
  return g;
}

namespace {

double safe_value(const ConcentratedModel& model, const BlockMatrixG& g) {
  try {
    return model.neg_log_lik(g);
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

ScanPoint profile(const ConcentratedModel& model, double t, const Eigen::VectorXd& warm) {
  const auto& psi = model.structure();
  const int n_tan = static_cast<int>(warm.size());
  ScanPoint pt{t, warm, 0.0};
  if (n_tan == 0) {
    pt.neg_log_lik = safe_value(model, scan_g(psi, t, warm));
    return pt;
  }
  const int p = psi.max_lag();
  const Eigen::Vector2d w(-std::sin(t), std::cos(t));
  ObjectiveFn fn = [&](const Eigen::VectorXd& c, bool need_h, double& f, Eigen::VectorXd& grad,
                       Eigen::MatrixXd& hess) {
    const BlockMatrixG g = scan_g(psi, t, c);
    const Derivatives d = model.evaluate(g, need_h);
    f = d.value;
    grad.resize(n_tan);
    for (int l = 1; l <= n_tan; ++l) grad(l - 1) = d.gradient.row(psi.g_row(p, l)).dot(w);
    if (!need_h) return;
    hess.resize(n_tan, n_tan);
    for (int a = 1; a <= n_tan; ++a) {
      for (int b = 1; b <= n_tan; ++b) {
        hess(a - 1, b - 1) =
            w.dot(d.hessian.block(psi.g_row(p, a) * 2, psi.g_row(p, b) * 2, 2, 2) * w);
      }
    }
  };
  MinimizeOptions opts;
  opts.max_iters = 100;
  opts.grad_tol = 1e-10;
  bool have = false;
  for (const Eigen::VectorXd& start : {warm, Eigen::VectorXd(Eigen::VectorXd::Zero(n_tan))}) {
    try {
      const MinimizeResult r = damped_newton(fn, start, opts);
      if (!have || r.f < pt.neg_log_lik) {
        pt.c = r.x;
        pt.neg_log_lik = r.f;
        have = true;
      }
    } catch (const NumericalError&) {
    }
  }
  if (!have) pt.neg_log_lik = std::numeric_limits<double>::infinity();
  return pt;
}

void set_best(ScanResult& res) {
  res.best_index = 0;
  for (std::size_t i = 1; i < res.points.size(); ++i) {
    if (res.points[i].neg_log_lik < res.points[res.best_index].neg_log_lik) res.best_index = i;
  }
}

}  // namespace

ScanResult circle_scan(const ConcentratedModel& model, int points) {
  if (points < 1) throw StructureError("scan: need at least one grid point");
  const int n_tan = scan_tangent_count(model.structure(), model.m());
  ScanResult res;
  res.points.reserve(points);
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(n_tan);
  for (int i = 0; i < points; ++i) {
    const double t = std::numbers::pi * i / points;
    res.points.push_back(profile(model, t, warm));
    if (std::isfinite(res.points.back().neg_log_lik) && res.points.back().c.allFinite() &&
        (res.points.back().c.size() == 0 || res.points.back().c.cwiseAbs().maxCoeff() < 1e6)) {
      warm = res.points.back().c;
    }
  }
  set_best(res);
  return res;
}

ScanResult surface_scan(const ConcentratedModel& model, int t_points, int c_points, double c_min,
                        double c_max) {
  const auto& psi = model.structure();
  if (scan_tangent_count(psi, model.m()) != 1) {
    throw StructureError("surface scan needs exactly one tangent coefficient");
  }
  if (t_points < 1 || c_points < 2 || !(c_max > c_min)) {
    throw StructureError("surface scan: invalid grid");
  }
  ScanResult res;
  res.points.reserve(static_cast<std::size_t>(t_points) * c_points);
  for (int i = 0; i < t_points; ++i) {
    const double t = std::numbers::pi * i / t_points;
    for (int j = 0; j < c_points; ++j) {
      Eigen::VectorXd c(1);
      c(0) = c_min + (c_max - c_min) * j / (c_points - 1);
      res.points.push_back({t, c, safe_value(model, scan_g(psi, t, c))});
    }
  }
  set_best(res);
  return res;
}

}  // namespace minvarx
