#pragma once

#include <vector>

#include <Eigen/Dense>

#include "minvarx/blockops.hpp"
#include "minvarx/structure.hpp"

namespace minvarx {

/// Lagged regression layout for a VARX(p) fit.
///
/// y drops the first p samples of Y_f; x_lag stacks [L^p X; ...; L^1 X], where
/// column t of the L^i X block is sample t + p - i of X_f.
struct LagDataset {
  Eigen::MatrixXd y;      // k x T
  Eigen::MatrixXd x_lag;  // (p m) x T
  int p = 0;
  int k = 0;
  int m = 0;
  int t = 0;
};

/// Throws DataError when the column counts differ or T = cols - p <= 0.
LagDataset build_lag_data(const Eigen::MatrixXd& x_f, const Eigen::MatrixXd& y_f, int p);

/// Second moments of a LagDataset.
///
/// b = X X', a = X X' - X Y' (Y Y')^{-1} Y X' with X = x_lag.
struct MomentMatrices {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd yy;
  Eigen::MatrixXd yx;
  double logdet_yy = 0.0;
  int p = 0;
  int k = 0;
  int m = 0;
  int t = 0;
};

/// Throws DataError if Y Y' or X X' is singular; no regularization is applied.
MomentMatrices moment_matrices(const LagDataset& data);

/// log det(K A K') - log det(K B K') for an arbitrary regressor map K.
double embedded_neg_log_lik(const MomentMatrices& mom, const Eigen::MatrixXd& k_map);

/// Least-squares coefficient of Y on K X: Y X' K' (K X X' K')^{-1}.
Eigen::MatrixXd embedded_optimal_coeff(const MomentMatrices& mom, const Eigen::MatrixXd& k_map);

/// Value, gradient and (optionally) Hessian of the concentrated objective at
/// one G. The Hessian acts on row-major vec(G): index = row * m + col.
struct Derivatives {
  double value = 0.0;
  Eigen::MatrixXd gradient;
  Eigen::MatrixXd hessian;
};

/// The concentrated negative log-likelihood of a structure on fixed moments.
///
/// All evaluations at one G share a single pair of Cholesky factorizations of
/// kappa(G) A kappa(G)' and kappa(G) B kappa(G)'. Evaluation is pure; one
/// model may be shared across threads.
class ConcentratedModel {
 public:
  ConcentratedModel(MomentMatrices moments, StructureParams psi);

  const MomentMatrices& moments() const noexcept { return mom_; }
  const StructureParams& structure() const noexcept { return psi_; }
  int m() const noexcept { return mom_.m; }

  double neg_log_lik(const BlockMatrixG& g) const;
  /// D with <D, eta> equal to the directional derivative along eta.
  Eigen::MatrixXd gradient(const BlockMatrixG& g) const;
  /// Second directional derivative d^2 f [psi, eta].
  double hessian_bilinear(const BlockMatrixG& g, const Eigen::MatrixXd& psi_dir,
                          const Eigen::MatrixXd& eta_dir) const;
  /// Symmetric (n_min m) x (n_min m) Hessian on row-major vec(G).
  Eigen::MatrixXd hessian_matrix(const BlockMatrixG& g) const;

  Derivatives evaluate(const BlockMatrixG& g, bool with_hessian) const;

  /// Least-squares H for the given G; columns ordered like kappa rows.
  Eigen::MatrixXd optimal_H(const BlockMatrixG& g) const;

 private:
  void check(const BlockMatrixG& g) const;

  MomentMatrices mom_;
  StructureParams psi_;
  std::vector<KappaPlacement> pattern_;
};

/// Omega = (1/T) (Y - H kappa(G) X)(Y - H kappa(G) X)'.
Eigen::MatrixXd residual_covariance(const LagDataset& data, const BlockMatrixG& g,
                                    const Eigen::MatrixXd& h);

/// Phi_1 .. Phi_p from the block sums
/// Phi_i = sum_{j >= i} sum_{a=0}^{j-i} H_{j,a} G_{j,j-i-a}.
std::vector<Eigen::MatrixXd> phi_from_hfg(const Eigen::MatrixXd& h, const StructureParams& psi,
                                          const BlockMatrixG& g);

/// Banded embedding of [B_{p2} ... B_0]: (p1+1) d x (p1+p2+1) m, with row
/// block i starting at column block i. b_coeffs holds B_0 .. B_{p2}.
Eigen::MatrixXd vrw_upsilon(const std::vector<Eigen::MatrixXd>& b_coeffs, int p1);

/// Concentrated objective with upsilon(B) in place of kappa(G); the moments
/// must have p = p1 + p2 + 1.
double vrw_neg_log_lik(const MomentMatrices& mom, const std::vector<Eigen::MatrixXd>& b_coeffs,
                       int p1);

/// Least-squares A_0 .. A_{p1} (each k x d) given B.
std::vector<Eigen::MatrixXd> vrw_optimal_A(const MomentMatrices& mom,
                                           const std::vector<Eigen::MatrixXd>& b_coeffs, int p1);

}  // namespace minvarx
