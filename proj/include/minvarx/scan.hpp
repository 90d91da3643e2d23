#pragma once

#include <vector>

#include <Eigen/Dense>

#include "minvarx/blockops.hpp"
#include "minvarx/likelihood.hpp"

namespace minvarx {

/// Likelihood scans for two-dimensional regressors (m = 2).
///
/// Supported structures are [(p,1)] and [(p,1),(rho,1)]. The normalized G is
/// G_{p,0} = v(t) = (cos t, sin t), G_{rho,0} = w(t) = (-sin t, cos t) and
/// G_{p,l} = c_l w(t) for 1 <= l <= n_tangent; every other block vanishes.

struct ScanPoint {
  double t = 0.0;
  Eigen::VectorXd c;
  double neg_log_lik = 0.0;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::size_t best_index = 0;

  const ScanPoint& best() const { return points.at(best_index); }
};

/// Number of free tangent coefficients; throws StructureError if the
/// structure cannot be scanned.
int scan_tangent_count(const StructureParams& psi, int m);

/// The normalized G at (t, c).
BlockMatrixG scan_g(const StructureParams& psi, double t, const Eigen::VectorXd& c);

/// Scan over t = pi i / points, i = 0..points-1. Tangent coefficients are
/// profiled out by damped Newton at each t.
ScanResult circle_scan(const ConcentratedModel& model, int points);

/// Full (t, c) grid for structures with exactly one tangent coefficient.
ScanResult surface_scan(const ConcentratedModel& model, int t_points, int c_points, double c_min,
                        double c_max);

}  // namespace minvarx
