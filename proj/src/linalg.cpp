#include "minvarx/linalg.hpp"

#include <cmath>

#include "minvarx/errors.hpp"

namespace minvarx {

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++rank;
  }
  return rank;
}

double logdet_spd(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    const auto& l = llt.matrixLLT();
    double acc = 0.0;
    bool ok = true;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      const double v = l(i, i);
      if (!(v > 0.0) || !std::isfinite(v)) {
        ok = false;
        break;
      }
      acc += std::log(v);
    }
    if (ok) return 2.0 * acc;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(m), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("logdet: eigen-decomposition failed");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double v = eig.eigenvalues()(i);
    if (!(v > 1e-300)) {
      throw NumericalError("logdet: matrix is not positive definite (eigenvalue " +
                           std::to_string(v) + ")");
    }
    acc += std::log(v);
  }
  return acc;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m, const std::vector<int>& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = m.col(cols[i]);
  return out;
}

}  // namespace minvarx
