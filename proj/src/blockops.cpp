#include "minvarx/blockops.hpp"

#include <algorithm>
#include <cmath>

#include "minvarx/errors.hpp"

namespace minvarx {

// ---------------------------------------------------------------------------
// BlockMatrixG

BlockMatrixG::BlockMatrixG(StructureParams psi, Eigen::MatrixXd data)
    : psi_(std::move(psi)), data_(std::move(data)) {
  if (data_.rows() != psi_.mcmillan_degree()) {
    throw StructureError("BlockMatrixG: expected " + std::to_string(psi_.mcmillan_degree()) +
                         " rows for " + psi_.to_string() + ", got " +
                         std::to_string(data_.rows()));
  }
}

BlockMatrixG BlockMatrixG::zeros(const StructureParams& psi, int m) {
  return BlockMatrixG(psi, Eigen::MatrixXd::Zero(psi.mcmillan_degree(), m));
}

Eigen::Block<Eigen::MatrixXd> BlockMatrixG::block(int r, int j) {
  return data_.block(psi_.g_row(r, j), 0, psi_.d(r), data_.cols());
}

Eigen::Block<const Eigen::MatrixXd> BlockMatrixG::block(int r, int j) const {
  return data_.block(psi_.g_row(r, j), 0, psi_.d(r), data_.cols());
}

Eigen::MatrixXd BlockMatrixG::lead() const { return select_rows(data_, psi_.lead_rows()); }

// ---------------------------------------------------------------------------
// kappa

std::vector<KappaPlacement> kappa_pattern(const StructureParams& psi) {
  const int p = psi.max_lag();
  std::vector<KappaPlacement> out;
  for (const auto& g : psi.groups()) {
    const int r = g.exponent;
    for (int l = 0; l < r; ++l) {
      for (int lag = 1; lag <= r - l; ++lag) {
        const int j = r - l - lag;
        const int src = psi.g_row(r, j);
        const int dst = psi.kappa_row(r, l);
        for (int s = 0; s < g.sub_rank; ++s) out.push_back({src + s, dst + s, p - lag});
      }
    }
  }
  return out;
}

Eigen::MatrixXd kappa(const BlockMatrixG& g) {
  const auto& psi = g.structure();
  const int m = g.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(psi.mcmillan_degree(), psi.max_lag() * m);
  for (const auto& pl : kappa_pattern(psi)) {
    out.block(pl.kappa_row, pl.col_block * m, 1, m) = g.data().row(pl.g_row);
  }
  return out;
}

Eigen::MatrixXd kappa_adjoint(const StructureParams& psi, const Eigen::MatrixXd& m_kappa, int m) {
  if (m_kappa.rows() != psi.mcmillan_degree() || m_kappa.cols() != psi.max_lag() * m) {
    throw StructureError("kappa_adjoint: shape mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(psi.mcmillan_degree(), m);
  for (const auto& pl : kappa_pattern(psi)) {
    out.row(pl.g_row) += m_kappa.block(pl.kappa_row, pl.col_block * m, 1, m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CentralizerElement

CentralizerElement::CentralizerElement(StructureParams psi) : psi_(std::move(psi)) {
  const auto& groups = psi_.groups();
  const std::size_t ng = groups.size();
  pair_base_.assign(ng * ng, 0);
  int next = 0;
  for (std::size_t a = 0; a < ng; ++a) {
    for (std::size_t b = 0; b < ng; ++b) {
      pair_base_[a * ng + b] = next;
      const int rho1 = groups[a].exponent;
      const int rho2 = groups[b].exponent;
      for (int j = min_wall_index(rho1, rho2); j < rho1; ++j) {
        walls_.push_back(Eigen::MatrixXd::Zero(groups[a].sub_rank, groups[b].sub_rank));
        ++next;
      }
    }
  }
}

CentralizerElement CentralizerElement::identity(const StructureParams& psi) {
  CentralizerElement s(psi);
  for (const auto& g : psi.groups()) s.wall(g.exponent, g.exponent, 0).setIdentity();
  return s;
}

CentralizerElement CentralizerElement::from_matrix(const StructureParams& psi,
                                                   const Eigen::MatrixXd& m) {
  const int n = psi.mcmillan_degree();
  if (m.rows() != n || m.cols() != n) throw StructureError("centralizer: shape mismatch");
  CentralizerElement s(psi);
  for (const auto& ga : psi.groups()) {
    for (const auto& gb : psi.groups()) {
      for (int j = min_wall_index(ga.exponent, gb.exponent); j < ga.exponent; ++j) {
        s.wall(ga.exponent, gb.exponent, j) =
            m.block(psi.g_row(ga.exponent, j), psi.g_row(gb.exponent, 0), ga.sub_rank, gb.sub_rank);
      }
    }
  }
  return s;
}

int CentralizerElement::slot(int rho1, int rho2, int j) const {
  const auto& groups = psi_.groups();
  const std::size_t ng = groups.size();
  auto index_of = [&](int rho) {
    for (std::size_t i = 0; i < ng; ++i) {
      if (groups[i].exponent == rho) return i;
    }
    throw StructureError("centralizer: no block with exponent " + std::to_string(rho));
  };
  const std::size_t a = index_of(rho1);
  const std::size_t b = index_of(rho2);
  const int jmin = min_wall_index(rho1, rho2);
  if (j < jmin || j >= rho1) {
    throw StructureError("centralizer: wall index " + std::to_string(j) + " out of range for (" +
                         std::to_string(rho1) + "," + std::to_string(rho2) + ")");
  }
  return pair_base_[a * ng + b] + (j - jmin);
}

Eigen::MatrixXd& CentralizerElement::wall(int rho1, int rho2, int j) {
  return walls_[slot(rho1, rho2, j)];
}

const Eigen::MatrixXd& CentralizerElement::wall(int rho1, int rho2, int j) const {
  return walls_[slot(rho1, rho2, j)];
}

int CentralizerElement::parameter_count() const {
  int total = 0;
  for (const auto& w : walls_) total += static_cast<int>(w.size());
  return total;
}

Eigen::MatrixXd realize_centralizer(const CentralizerElement& s) {
  const auto& psi = s.structure();
  const int n = psi.mcmillan_degree();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (const auto& ga : psi.groups()) {
    const int rho1 = ga.exponent;
    for (const auto& gb : psi.groups()) {
      const int rho2 = gb.exponent;
      const int jmin = CentralizerElement::min_wall_index(rho1, rho2);
      for (int j1 = 0; j1 < rho1; ++j1) {
        for (int j2 = 0; j2 < rho2; ++j2) {
          const int j = j1 - j2;
          if (j < jmin) continue;
          out.block(psi.g_row(rho1, j1), psi.g_row(rho2, j2), ga.sub_rank, gb.sub_rank) =
              s.wall(rho1, rho2, j);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generalized LQ

namespace {

// One sweep of the generalized LQ. The Cholesky variant keeps the lead walls
// near the identity when G_{:,0} is already close to orthonormal.
LqResult lq_pass(const BlockMatrixG& g, bool householder) {
  const auto& psi = g.structure();
  const auto& groups = psi.groups();
  const int ell = psi.total_rank();
  const int m = g.cols();
  const Eigen::MatrixXd lead = g.lead();

  // G_{:,0} = L W0 with L = R' from the QR of G_{:,0}'.
  Eigen::MatrixXd l_factor;
  if (householder) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(lead.transpose());
    l_factor = qr.matrixQR().topRows(ell).triangularView<Eigen::Upper>().transpose();
  } else {
    l_factor = (lead * lead.transpose()).llt().matrixL();
  }
  const Eigen::MatrixXd l_inv = l_factor.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(ell, ell));
  const Eigen::MatrixXd w0 = l_inv * lead;

  // lead-row offset of each group inside G_{:,0}
  std::vector<int> lead_offset(groups.size() + 1, 0);
  for (std::size_t a = 0; a < groups.size(); ++a) {
    lead_offset[a + 1] = lead_offset[a] + groups[a].sub_rank;
  }

  CentralizerElement s(psi);
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      s.wall(groups[a].exponent, groups[b].exponent, 0) =
          l_inv.block(lead_offset[a], lead_offset[b], groups[a].sub_rank, groups[b].sub_rank);
    }
  }

  for (std::size_t a = 0; a < groups.size(); ++a) {
    const int rho = groups[a].exponent;
    const int d_rho = groups[a].sub_rank;
    for (int j = 1; j < rho; ++j) {
      // Contribution of the already determined walls (j2 >= 1).
      Eigen::MatrixXd known = Eigen::MatrixXd::Zero(d_rho, m);
      for (const auto& gb : groups) {
        const int rho2 = gb.exponent;
        const int jmin = CentralizerElement::min_wall_index(rho, rho2);
        for (int j2 = 1; j2 < rho2; ++j2) {
          const int jj = j - j2;
          if (jj < jmin) continue;
          known += s.wall(rho, rho2, jj) * g.block(rho2, j2);
        }
      }
      // Unknown walls: groups with exponent >= rho - j, which lead the order.
      std::size_t nb = 0;
      while (nb < groups.size() && groups[nb].exponent >= rho - j) ++nb;
      const int rows = lead_offset[nb];
      const Eigen::MatrixXd rhs = -known * w0.topRows(rows).transpose();
      // U L_sub = rhs with L_sub lower triangular  <=>  L_sub' U' = rhs'.
      const Eigen::MatrixXd u = l_factor.topLeftCorner(rows, rows)
                                    .transpose()
                                    .triangularView<Eigen::Upper>()
                                    .solve(rhs.transpose())
                                    .transpose();
      for (std::size_t b = 0; b < nb; ++b) {
        s.wall(rho, groups[b].exponent, j) =
            u.block(0, lead_offset[b], d_rho, groups[b].sub_rank);
      }
    }
  }

  BlockMatrixG g_o(psi, realize_centralizer(s) * g.data());
  return {std::move(s), std::move(g_o)};
}

}  // namespace

LqResult lq_multi_lag(const BlockMatrixG& g, double tol) {
  const auto& psi = g.structure();
  const int ell = psi.total_rank();
  const int m = g.cols();
  if (ell > m) {
    throw RankError("lq_multi_lag: G_{:,0} has " + std::to_string(ell) + " rows but only " +
                        std::to_string(m) + " columns",
                    m, ell);
  }

  const Eigen::MatrixXd lead = g.lead();
  const int rank = numerical_rank(lead, tol);
  if (rank < ell) {
    throw RankError("lq_multi_lag: G_{:,0} has numerical rank " + std::to_string(rank) +
                        ", expected " + std::to_string(ell),
                    rank, ell);
  }

  LqResult first = lq_pass(g, true);
  LqResult second = lq_pass(first.g_o, false);
  CentralizerElement s = CentralizerElement::from_matrix(
      psi, realize_centralizer(second.s) * realize_centralizer(first.s));
  return {std::move(s), std::move(second.g_o)};
}

double lq_relation_residual(const BlockMatrixG& g_o) {
  const auto& psi = g_o.structure();
  const Eigen::MatrixXd lead = g_o.lead();
  double worst = (lead * lead.transpose() -
                  Eigen::MatrixXd::Identity(lead.rows(), lead.rows()))
                     .cwiseAbs()
                     .maxCoeff();
  for (const auto& ga : psi.groups()) {
    const int rho = ga.exponent;
    for (int l = 1; l < rho; ++l) {
      for (const auto& gb : psi.groups()) {
        if (gb.exponent < rho - l) continue;
        const double v =
            (g_o.block(rho, l) * g_o.block(gb.exponent, 0).transpose()).cwiseAbs().maxCoeff();
        worst = std::max(worst, v);
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Minimality

RankReport check_minimality_G(const BlockMatrixG& g, double tol) {
  RankReport rep;
  rep.expected = g.structure().total_rank();
  rep.rank = numerical_rank(g.lead(), tol);
  rep.pass = rep.rank == rep.expected;
  return rep;
}

RankReport check_minimality_H(const Eigen::MatrixXd& h, const StructureParams& psi, double tol) {
  if (h.cols() != psi.mcmillan_degree()) {
    throw StructureError("check_minimality_H: H must have n_min columns");
  }
  RankReport rep;
  rep.expected = psi.total_rank();
  rep.rank = numerical_rank(select_cols(h, psi.lead_rows()), tol);
  rep.pass = rep.rank == rep.expected;
  return rep;
}

// ---------------------------------------------------------------------------
// (C, O) coordinates

const Eigen::MatrixXd& OrthoParam::coeff(int r, int l) const {
  auto it = c.find({r, l});
  if (it == c.end()) {
    throw StructureError("OrthoParam: no coefficient block C_{" + std::to_string(r) + "," +
                         std::to_string(l) + "}");
  }
  return it->second;
}

int ortho_basis_rows(const StructureParams& psi, int m, int r, int l) {
  int rows = m - psi.total_rank();
  for (int j = 1; j <= r - l - 1; ++j) rows += psi.d(j);
  return rows;
}

OrthoParam parameterize(const BlockMatrixG& g_o, double tol) {
  const auto& psi = g_o.structure();
  const int m = g_o.cols();
  const int ell = psi.total_rank();
  const double residual = lq_relation_residual(g_o);
  if (!(residual <= tol)) {
    throw StructureError("parameterize: G_o violates the orthogonality relations (residual " +
                         std::to_string(residual) + ")");
  }

  const Eigen::MatrixXd lead = g_o.lead();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(lead.transpose());
  const Eigen::MatrixXd q = qr.householderQ();

  OrthoParam out{psi, Eigen::MatrixXd(m, m), {}};
  out.o.topRows(ell) = lead;
  out.o.bottomRows(m - ell) = q.rightCols(m - ell).transpose();

  for (const auto& g : psi.groups()) {
    for (int l = 1; l < g.exponent; ++l) {
      const int rows = ortho_basis_rows(psi, m, g.exponent, l);
      out.c[{g.exponent, l}] = g_o.block(g.exponent, l) * out.o.bottomRows(rows).transpose();
    }
  }
  return out;
}

BlockMatrixG reconstruct(const OrthoParam& param, double tol) {
  const auto& psi = param.structure;
  const int m = static_cast<int>(param.o.rows());
  if (param.o.cols() != m) throw StructureError("reconstruct: O must be square");
  if (psi.total_rank() > m) throw StructureError("reconstruct: total rank exceeds m");
  const double orth =
      (param.o * param.o.transpose() - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  if (!(orth <= tol)) {
    throw StructureError("reconstruct: O is not orthogonal (residual " + std::to_string(orth) +
                         ")");
  }

  BlockMatrixG g = BlockMatrixG::zeros(psi, m);
  int lead_row = 0;
  for (const auto& grp : psi.groups()) {
    g.block(grp.exponent, 0) = param.o.middleRows(lead_row, grp.sub_rank);
    lead_row += grp.sub_rank;
  }
  for (const auto& grp : psi.groups()) {
    for (int l = 1; l < grp.exponent; ++l) {
      const int rows = ortho_basis_rows(psi, m, grp.exponent, l);
      const auto& c = param.coeff(grp.exponent, l);
      if (c.rows() != grp.sub_rank || c.cols() != rows) {
        throw StructureError("reconstruct: C_{" + std::to_string(grp.exponent) + "," +
                             std::to_string(l) + "} must be " + std::to_string(grp.sub_rank) +
                             "x" + std::to_string(rows));
      }
      g.block(grp.exponent, l) = c * param.o.bottomRows(rows);
    }
  }
  return g;
}

}  // namespace minvarx
