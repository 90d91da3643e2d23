#include "minvarx/likelihood.hpp"

#include <cmath>
#include <string>

#include "minvarx/errors.hpp"
#include "minvarx/linalg.hpp"

namespace minvarx {

namespace {

// Inverse and log-determinant of a symmetric positive definite matrix.
struct SpdFactor {
  Eigen::MatrixXd inverse;
  double logdet = 0.0;
};

SpdFactor factor_spd(const Eigen::MatrixXd& m) {
  SpdFactor out;
  const Eigen::Index n = m.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    const auto& l = llt.matrixLLT();
    bool ok = true;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) {
        ok = false;
        break;
      }
      acc += std::log(l(i, i));
    }
    if (ok) {
      out.logdet = 2.0 * acc;
      out.inverse = llt.solve(Eigen::MatrixXd::Identity(n, n));
      return out;
    }
  }
  out.logdet = logdet_spd(m);  // throws when m is not positive definite
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(m));
  out.inverse = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                eig.eigenvectors().transpose();
  return out;
}

// K = R' Q' with Q orthonormal columns spanning the row space of K.
struct RowSpace {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
};

RowSpace row_space(const Eigen::MatrixXd& k_map) {
  const Eigen::Index n = k_map.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(k_map.transpose());
  RowSpace out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(k_map.cols(), n);
  out.r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  return out;
}

// R^{-1} X for the upper triangular R.
Eigen::MatrixXd r_solve(const RowSpace& rs, const Eigen::MatrixXd& x) {
  return rs.r.triangularView<Eigen::Upper>().solve(x);
}

}  // namespace

LagDataset build_lag_data(const Eigen::MatrixXd& x_f, const Eigen::MatrixXd& y_f, int p) {
  if (p < 1) throw DataError("build_lag_data: p must be >= 1");
  if (x_f.cols() != y_f.cols()) {
    throw DataError("build_lag_data: X has " + std::to_string(x_f.cols()) + " samples, Y has " +
                    std::to_string(y_f.cols()));
  }
  const int t = static_cast<int>(y_f.cols()) - p;
  if (t <= 0) {
    throw DataError("build_lag_data: need more than p = " + std::to_string(p) + " samples, got " +
                    std::to_string(y_f.cols()));
  }
  LagDataset out;
  out.p = p;
  out.k = static_cast<int>(y_f.rows());
  out.m = static_cast<int>(x_f.rows());
  out.t = t;
  out.y = y_f.rightCols(t);
  out.x_lag.resize(static_cast<Eigen::Index>(p) * out.m, t);
  for (int c = 0; c < p; ++c) {
    const int lag = p - c;
    out.x_lag.middleRows(static_cast<Eigen::Index>(c) * out.m, out.m) = x_f.middleCols(p - lag, t);
  }
  return out;
}

MomentMatrices moment_matrices(const LagDataset& data) {
  MomentMatrices mom;
  mom.p = data.p;
  mom.k = data.k;
  mom.m = data.m;
  mom.t = data.t;
  mom.yy = symmetrize(data.y * data.y.transpose());
  mom.yx = data.y * data.x_lag.transpose();
  mom.b = symmetrize(data.x_lag * data.x_lag.transpose());

  Eigen::LLT<Eigen::MatrixXd> yy_llt(mom.yy);
  if (yy_llt.info() != Eigen::Success || yy_llt.rcond() < 1e-13) {
    throw DataError("moment_matrices: Y Y' is singular (need T >= k and Y of full row rank)");
  }
  Eigen::LLT<Eigen::MatrixXd> b_llt(mom.b);
  if (b_llt.info() != Eigen::Success || b_llt.rcond() < 1e-13) {
    throw DataError("moment_matrices: X_lag X_lag' is singular; more samples are needed (T = " +
                    std::to_string(data.t) + ", p m = " + std::to_string(data.p * data.m) + ")");
  }
  mom.logdet_yy = logdet_spd(mom.yy);
  mom.a = symmetrize(mom.b - mom.yx.transpose() * yy_llt.solve(mom.yx));
  return mom;
}

double embedded_neg_log_lik(const MomentMatrices& mom, const Eigen::MatrixXd& k_map) {
  if (k_map.cols() != mom.b.rows()) throw StructureError("neg_log_lik: regressor map shape mismatch");
  if (k_map.rows() > k_map.cols()) {
    throw RankError("neg_log_lik: kappa(G) has more rows than columns",
                    static_cast<int>(k_map.cols()), static_cast<int>(k_map.rows()));
  }
  // The ratio is invariant under K -> T K, so evaluate it on an orthonormal basis.
  const RowSpace rs = row_space(k_map);
  const double lb = logdet_spd(symmetrize(rs.q.transpose() * mom.b * rs.q));
  return logdet_spd(symmetrize(rs.q.transpose() * mom.a * rs.q)) - lb;
}

Eigen::MatrixXd embedded_optimal_coeff(const MomentMatrices& mom, const Eigen::MatrixXd& k_map) {
  if (k_map.cols() != mom.b.rows()) throw StructureError("optimal_H: regressor map shape mismatch");
  const RowSpace rs = row_space(k_map);
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(rs.q.transpose() * mom.b * rs.q));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("optimal_H: kappa(G) B kappa(G)' is not positive definite");
  }
  // H = Y X' Q (Q'BQ)^{-1} R'^{-1}
  const Eigen::MatrixXd c = llt.solve(rs.q.transpose() * mom.yx.transpose());
  return r_solve(rs, c).transpose();
}

ConcentratedModel::ConcentratedModel(MomentMatrices moments, StructureParams psi)
    : mom_(std::move(moments)), psi_(std::move(psi)), pattern_(kappa_pattern(psi_)) {
  if (psi_.max_lag() != mom_.p) {
    throw StructureError("structure " + psi_.to_string() + " has p = " +
                         std::to_string(psi_.max_lag()) + " but the data use p = " +
                         std::to_string(mom_.p));
  }
  psi_.check_fits(mom_.k, mom_.m);
}

void ConcentratedModel::check(const BlockMatrixG& g) const {
  if (!(g.structure() == psi_) || g.cols() != mom_.m) {
    throw StructureError("G does not match the model structure " + psi_.to_string());
  }
}

double ConcentratedModel::neg_log_lik(const BlockMatrixG& g) const {
  check(g);
  return embedded_neg_log_lik(mom_, kappa(g));
}

Derivatives ConcentratedModel::evaluate(const BlockMatrixG& g, bool with_hessian) const {
  check(g);
  const int m = mom_.m;
  const Eigen::MatrixXd k_map = kappa(g);
  const RowSpace rs = row_space(k_map);
  const Eigen::MatrixXd qa = rs.q.transpose() * mom_.a;
  const Eigen::MatrixXd qb = rs.q.transpose() * mom_.b;
  const SpdFactor ma = factor_spd(symmetrize(qa * rs.q));
  const SpdFactor mb = factor_spd(symmetrize(qb * rs.q));

  Derivatives out;
  out.value = ma.logdet - mb.logdet;
  // P N = R^{-1} (Q'WQ)^{-1} Q'W
  const Eigen::MatrixXd pna = r_solve(rs, ma.inverse * qa);
  const Eigen::MatrixXd pnb = r_solve(rs, mb.inverse * qb);
  out.gradient = kappa_adjoint(psi_, 2.0 * (pna - pnb), m);
  if (!with_hessian) return out;

  const Eigen::MatrixXd na = k_map * mom_.a;
  const Eigen::MatrixXd nb = k_map * mom_.b;
  const Eigen::MatrixXd wa = symmetrize(mom_.a - na.transpose() * pna);
  const Eigen::MatrixXd wb = symmetrize(mom_.b - nb.transpose() * pnb);
  // P = R^{-1} (Q'WQ)^{-1} R'^{-1}
  const Eigen::MatrixXd pa_full = symmetrize(r_solve(rs, r_solve(rs, ma.inverse).transpose()));
  const Eigen::MatrixXd pb_full = symmetrize(r_solve(rs, r_solve(rs, mb.inverse).transpose()));
  const int dim = static_cast<int>(g.data().size());
  out.hessian = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& p1 : pattern_) {
    const int r1 = p1.kappa_row;
    const int c1 = p1.col_block * m;
    for (const auto& p2 : pattern_) {
      const int r2 = p2.kappa_row;
      const int c2 = p2.col_block * m;
      const double pa = pa_full(r2, r1);
      const double pb = pb_full(r2, r1);
      auto blk = out.hessian.block(p1.g_row * m, p2.g_row * m, m, m);
      // d^2 logdet(K W K')[e_(r1,c1), e_(r2,c2)] for each of A and B.
      blk.noalias() += 2.0 * (pa * wa.block(c1, c2, m, m) - pb * wb.block(c1, c2, m, m));
      blk.noalias() -= 2.0 * (pna.block(r2, c1, 1, m).transpose() * pna.block(r1, c2, 1, m) -
                              pnb.block(r2, c1, 1, m).transpose() * pnb.block(r1, c2, 1, m));
    }
  }
  out.hessian = symmetrize(out.hessian);
  return out;
}

Eigen::MatrixXd ConcentratedModel::gradient(const BlockMatrixG& g) const {
  return evaluate(g, false).gradient;
}

Eigen::MatrixXd ConcentratedModel::hessian_matrix(const BlockMatrixG& g) const {
  return evaluate(g, true).hessian;
}

double ConcentratedModel::hessian_bilinear(const BlockMatrixG& g, const Eigen::MatrixXd& psi_dir,
                                           const Eigen::MatrixXd& eta_dir) const {
  check(g);
  if (psi_dir.rows() != g.data().rows() || psi_dir.cols() != g.cols() ||
      eta_dir.rows() != g.data().rows() || eta_dir.cols() != g.cols()) {
    throw StructureError("hessian_bilinear: directions must be shaped like G");
  }
  const Eigen::MatrixXd k_map = kappa(g);
  const Eigen::MatrixXd kpsi = kappa(BlockMatrixG(psi_, psi_dir));
  const Eigen::MatrixXd keta = kappa(BlockMatrixG(psi_, eta_dir));

  const RowSpace rs = row_space(k_map);

  auto term = [&](const Eigen::MatrixXd& w) {
    const Eigen::MatrixXd qw = rs.q.transpose() * w;
    const SpdFactor f = factor_spd(symmetrize(qw * rs.q));
    const Eigen::MatrixXd pn = r_solve(rs, f.inverse * qw);
    const Eigen::MatrixXd p_inv = symmetrize(r_solve(rs, r_solve(rs, f.inverse).transpose()));
    const Eigen::MatrixXd resid = symmetrize(w - (k_map * w).transpose() * pn);
    auto half = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
      const double first = (p_inv * x * resid * y.transpose()).trace();
      const double second = (pn * x.transpose() * pn * y.transpose()).trace();
      return first - second;
    };
    // Both orders, so the result is exactly symmetric in the two directions.
    return half(kpsi, keta) + half(keta, kpsi);
  };
  return term(mom_.a) - term(mom_.b);
}

Eigen::MatrixXd ConcentratedModel::optimal_H(const BlockMatrixG& g) const {
  check(g);
  return embedded_optimal_coeff(mom_, kappa(g));
}

Eigen::MatrixXd residual_covariance(const LagDataset& data, const BlockMatrixG& g,
                                    const Eigen::MatrixXd& h) {
  const Eigen::MatrixXd k_map = kappa(g);
  if (h.rows() != data.k || h.cols() != k_map.rows() || k_map.cols() != data.x_lag.rows()) {
    throw StructureError("residual_covariance: inconsistent shapes");
  }
  const Eigen::MatrixXd e = data.y - h * (k_map * data.x_lag);
  return symmetrize(e * e.transpose()) / static_cast<double>(data.t);
}

std::vector<Eigen::MatrixXd> phi_from_hfg(const Eigen::MatrixXd& h, const StructureParams& psi,
                                          const BlockMatrixG& g) {
  const int p = psi.max_lag();
  const int m = g.cols();
  if (h.cols() != psi.mcmillan_degree()) throw StructureError("phi_from_hfg: H must have n_min columns");
  std::vector<Eigen::MatrixXd> phi(p, Eigen::MatrixXd::Zero(h.rows(), m));
  for (int i = 1; i <= p; ++i) {
    for (const auto& grp : psi.groups()) {
      const int j = grp.exponent;
      if (j < i) continue;
      for (int a = 0; a <= j - i; ++a) {
        phi[i - 1] += h.middleCols(psi.kappa_row(j, a), grp.sub_rank) * g.block(j, j - i - a);
      }
    }
  }
  return phi;
}

Eigen::MatrixXd vrw_upsilon(const std::vector<Eigen::MatrixXd>& b_coeffs, int p1) {
  if (b_coeffs.empty() || p1 < 0) throw StructureError("vrw_upsilon: need B_0 and p1 >= 0");
  const int p2 = static_cast<int>(b_coeffs.size()) - 1;
  const Eigen::Index d = b_coeffs[0].rows();
  const Eigen::Index m = b_coeffs[0].cols();
  for (const auto& b : b_coeffs) {
    if (b.rows() != d || b.cols() != m) throw StructureError("vrw_upsilon: B blocks differ in shape");
  }
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero((p1 + 1) * d, (p1 + p2 + 1) * m);
  for (int i = 0; i <= p1; ++i) {
    for (int q = 0; q <= p2; ++q) u.block(i * d, (i + q) * m, d, m) = b_coeffs[p2 - q];
  }
  return u;
}

namespace {

Eigen::MatrixXd checked_upsilon(const MomentMatrices& mom,
                                const std::vector<Eigen::MatrixXd>& b_coeffs, int p1) {
  const Eigen::MatrixXd u = vrw_upsilon(b_coeffs, p1);
  const int p2 = static_cast<int>(b_coeffs.size()) - 1;
  if (p1 + p2 + 1 != mom.p || b_coeffs[0].cols() != mom.m) {
    throw StructureError("vrw: p1 + p2 + 1 must equal the data lag p and B must have m columns");
  }
  Eigen::MatrixXd stacked(b_coeffs[0].rows(), (p2 + 1) * b_coeffs[0].cols());
  for (int q = 0; q <= p2; ++q) stacked.middleCols(q * mom.m, mom.m) = b_coeffs[p2 - q];
  const int rank = numerical_rank(stacked);
  if (rank < stacked.rows()) {
    throw RankError("vrw: [B_p2 ... B_0] is rank deficient", rank, static_cast<int>(stacked.rows()));
  }
  return u;
}

}  // namespace

double vrw_neg_log_lik(const MomentMatrices& mom, const std::vector<Eigen::MatrixXd>& b_coeffs,
                       int p1) {
  return embedded_neg_log_lik(mom, checked_upsilon(mom, b_coeffs, p1));
}

std::vector<Eigen::MatrixXd> vrw_optimal_A(const MomentMatrices& mom,
                                           const std::vector<Eigen::MatrixXd>& b_coeffs, int p1) {
  const Eigen::MatrixXd coeff = embedded_optimal_coeff(mom, checked_upsilon(mom, b_coeffs, p1));
  const Eigen::Index d = b_coeffs[0].rows();
  // Row block i of upsilon carries A_{p1 - i}.
  std::vector<Eigen::MatrixXd> a(p1 + 1);
  for (int i = 0; i <= p1; ++i) a[p1 - i] = coeff.middleCols(i * d, d);
  return a;
}

}  // namespace minvarx
