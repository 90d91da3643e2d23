#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "minvarx/linalg.hpp"
#include "minvarx/structure.hpp"

namespace minvarx {

/// The stacked coefficient matrix G (n_min x m) together with its structure.
///
/// Rows of exponent r are stored as G_{r,r-1}, ..., G_{r,0}; each block has
/// d_r rows. G_{:,0} collects the G_{r,0} blocks in descending r.
class BlockMatrixG {
 public:
  BlockMatrixG(StructureParams psi, Eigen::MatrixXd data);

  static BlockMatrixG zeros(const StructureParams& psi, int m);

  const StructureParams& structure() const noexcept { return psi_; }
  const Eigen::MatrixXd& data() const noexcept { return data_; }
  Eigen::MatrixXd& data() noexcept { return data_; }
  int cols() const noexcept { return static_cast<int>(data_.cols()); }

  /// Block G_{r,j}, size d_r x m.
  Eigen::Block<Eigen::MatrixXd> block(int r, int j);
  Eigen::Block<const Eigen::MatrixXd> block(int r, int j) const;

  /// G_{:,0}, size total_rank x m.
  Eigen::MatrixXd lead() const;

 private:
  StructureParams psi_;
  Eigen::MatrixXd data_;
};

/// One row copy of the kappa embedding: G row `g_row` lands in kappa row
/// `kappa_row`, column block `col_block` (column block c holds lag p - c).
struct KappaPlacement {
  int g_row;
  int kappa_row;
  int col_block;
};

/// The sparse placement pattern of kappa for a structure.
std::vector<KappaPlacement> kappa_pattern(const StructureParams& psi);

/// kappa(G): n_min x (p m). Row block (r,l), lag i holds G_{r,r-l-i} when
/// i <= r - l and zero otherwise; column blocks run from lag p down to lag 1.
Eigen::MatrixXd kappa(const BlockMatrixG& g);

/// Adjoint of kappa with respect to the Frobenius inner product:
/// <kappa(eta), M> = <eta, kappa_adjoint(M)>.
Eigen::MatrixXd kappa_adjoint(const StructureParams& psi, const Eigen::MatrixXd& m_kappa, int m);

/// An element of Centr(F), stored by its free wall blocks S_{rho1,j; rho2,0}
/// with max(0, rho1 - rho2) <= j <= rho1 - 1 (each d_rho1 x d_rho2).
class CentralizerElement {
 public:
  explicit CentralizerElement(StructureParams psi);

  static CentralizerElement identity(const StructureParams& psi);
  /// Reads the wall blocks out of a dense n_min x n_min matrix. The remaining
  /// entries are ignored.
  static CentralizerElement from_matrix(const StructureParams& psi, const Eigen::MatrixXd& s);

  /// Smallest admissible wall index j for the exponent pair.
  static int min_wall_index(int rho1, int rho2) { return rho1 > rho2 ? rho1 - rho2 : 0; }

  const StructureParams& structure() const noexcept { return psi_; }

  Eigen::MatrixXd& wall(int rho1, int rho2, int j);
  const Eigen::MatrixXd& wall(int rho1, int rho2, int j) const;

  /// Number of scalar entries across all walls; equals centralizer_dim.
  int parameter_count() const;

 private:
  int slot(int rho1, int rho2, int j) const;

  StructureParams psi_;
  std::vector<Eigen::MatrixXd> walls_;
  std::vector<int> pair_base_;  // (group a, group b) -> first slot
};

/// Fills the full n_min x n_min matrix from the walls by sliding diagonally:
/// S_{rho1,j1; rho2,j2} = wall(rho1, rho2, j1 - j2) when j1 - j2 is an
/// admissible wall index, zero otherwise.
Eigen::MatrixXd realize_centralizer(const CentralizerElement& s);

struct LqResult {
  CentralizerElement s;
  BlockMatrixG g_o;
};

/// Generalized LQ: finds S in Centr(F) so that G_o = S G has orthonormal
/// G_o_{:,0} and G_o_{rho,l} orthogonal to G_o_{rho1,0} whenever
/// l > max(0, rho - rho1 - 1).
///
/// The lead walls come from an unpivoted Householder QR of G_{:,0}'; the
/// higher walls are then back-solved in increasing j. Throws RankError if
/// G_{:,0} is rank deficient at the given relative tolerance.
LqResult lq_multi_lag(const BlockMatrixG& g, double tol = kRankTolerance);

/// Largest absolute violation of the normalized-form relations
/// (G_{:,0} G_{:,0}' = I and the cross-block orthogonality).
double lq_relation_residual(const BlockMatrixG& g_o);

struct RankReport {
  int rank = 0;
  int expected = 0;
  bool pass = false;
};

/// Numerical rank of G_{:,0} against the total rank.
RankReport check_minimality_G(const BlockMatrixG& g, double tol = kRankTolerance);
/// Numerical rank of H_{:,0} (columns at the lead positions) against the total rank.
RankReport check_minimality_H(const Eigen::MatrixXd& h, const StructureParams& psi,
                              double tol = kRankTolerance);

/// Coordinates (C, O) of a normalized G_o.
///
/// O is orthogonal with rows [O_{p,0}; ...; O_{1,0}; O_perp]. For every
/// exponent r and 1 <= l <= r - 1, G_o_{r,l} = C_{r,l} [O_{r-l-1}; ...; O_1; O_perp].
struct OrthoParam {
  StructureParams structure;
  Eigen::MatrixXd o;
  std::map<std::pair<int, int>, Eigen::MatrixXd> c;

  const Eigen::MatrixXd& coeff(int r, int l) const;
};

/// Rows of O spanned by C_{r,l}: the lead rows of exponents < r - l followed
/// by O_perp. These are always the trailing rows of O.
int ortho_basis_rows(const StructureParams& psi, int m, int r, int l);

/// Completes G_o_{:,0} to an orthonormal basis and reads off C_{r,l}.
///
/// O_perp is taken from the trailing columns of the full Householder Q of
/// G_o_{:,0}'. Throws StructureError if the relations are violated by more
/// than tol.
OrthoParam parameterize(const BlockMatrixG& g_o, double tol = 1e-8);

/// Rebuilds G_o from (C, O). Throws StructureError if O is not orthogonal
/// within tol or a C block has the wrong shape.
BlockMatrixG reconstruct(const OrthoParam& param, double tol = 1e-8);

}  // namespace minvarx
