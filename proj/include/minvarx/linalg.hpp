#pragma once

#include <vector>

#include <Eigen/Dense>

namespace minvarx {

/// Default relative threshold for numerical rank decisions.
inline constexpr double kRankTolerance = 1e-10;

/// Number of singular values above tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& m, double tol = kRankTolerance);

/// log det of a symmetric positive definite matrix.
///
/// Uses a Cholesky factorization. When that fails, falls back to the symmetric
/// eigen-decomposition and throws NumericalError if any eigenvalue is below
/// 1e-300 (the log-determinant would be -inf or undefined).
double logdet_spd(const Eigen::MatrixXd& m);

/// Rows of m at the given indices, in order.
Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows);
/// Columns of m at the given indices, in order.
Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m, const std::vector<int>& cols);

/// (m + m') / 2.
inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace minvarx
