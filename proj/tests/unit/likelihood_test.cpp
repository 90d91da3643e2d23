#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "minvarx/errors.hpp"
#include "minvarx/likelihood.hpp"
#include "test_support.hpp"

using namespace minvarx;
using minvarx::tsupport::randn;

namespace {

MomentMatrices equal_moments(int k, int m, int p, std::mt19937_64& rng) {
  MomentMatrices mom;
  const Eigen::MatrixXd x = randn(p * m, 3 * p * m + 5, rng);
  mom.b = x * x.transpose();
  mom.a = mom.b;
  mom.yy = Eigen::MatrixXd::Identity(k, k);
  mom.yx = Eigen::MatrixXd::Zero(k, p * m);
  mom.p = p;
  mom.k = k;
  mom.m = m;
  mom.t = static_cast<int>(x.cols());
  return mom;
}

}  // namespace

TEST(LagData, IndexBookkeeping) {
  Eigen::MatrixXd x(1, 4), y(1, 4);
  x << 0, 1, 2, 3;
  y << 10, 11, 12, 13;
  const LagDataset d = build_lag_data(x, y, 2);
  EXPECT_EQ(d.t, 2);
  Eigen::MatrixXd expected_x(2, 2);
  expected_x << 0, 1, 1, 2;
  EXPECT_EQ(d.x_lag, expected_x);
  EXPECT_EQ(d.y, (Eigen::MatrixXd(1, 2) << 12, 13).finished());
}

TEST(LagData, SingleLagDropsLastColumn) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = randn(3, 20, rng);
  const LagDataset d = build_lag_data(x, x, 1);
  EXPECT_EQ(d.x_lag, x.leftCols(19));
  EXPECT_EQ(d.y, x.rightCols(19));
}

TEST(LagData, ThreeLagShapes) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd x = randn(3, 103, rng);
  const LagDataset d = build_lag_data(x, randn(2, 103, rng), 3);
  EXPECT_EQ(d.x_lag.rows(), 9);
  EXPECT_EQ(d.x_lag.cols(), 100);
  EXPECT_EQ(d.x_lag.col(0).head(3), x.col(0));
  EXPECT_EQ(d.x_lag.col(5).segment(3, 3), x.col(6));
  EXPECT_EQ(d.x_lag.col(5).tail(3), x.col(7));
}

TEST(LagData, Errors) {
  EXPECT_THROW(build_lag_data(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 4), 1), DataError);
  EXPECT_THROW(build_lag_data(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 3), 3), DataError);
}

TEST(Moments, MatchDirectFormula) {
  std::mt19937_64 rng(3);
  const LagDataset d = tsupport::random_dataset(3, 2, 2, 50, rng);
  const MomentMatrices mom = moment_matrices(d);
  const Eigen::MatrixXd& x = d.x_lag;
  const Eigen::MatrixXd& y = d.y;
  const Eigen::MatrixXd b = x * x.transpose();
  const Eigen::MatrixXd a = b - x * y.transpose() * (y * y.transpose()).inverse() * y * x.transpose();
  EXPECT_LT((mom.a - a).cwiseAbs().maxCoeff(), 1e-10 * b.cwiseAbs().maxCoeff());
  EXPECT_LT((mom.b - b).cwiseAbs().maxCoeff(), 1e-10 * b.cwiseAbs().maxCoeff());
  EXPECT_EQ(mom.a, mom.a.transpose());
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(mom.b - mom.a).eigenvalues();
  EXPECT_GT(ev.minCoeff(), -1e-9 * b.norm());
}

TEST(Moments, OrthogonalResponsesGiveEqualMoments) {
  Eigen::MatrixXd x_f = Eigen::MatrixXd::Zero(1, 5);
  Eigen::MatrixXd y_f = Eigen::MatrixXd::Zero(1, 5);
  x_f << 1, 0, 1, 0, 0;
  y_f << 0, 0, 0, 0, 1;
  const MomentMatrices mom = moment_matrices(build_lag_data(x_f, y_f, 1));
  EXPECT_LT((mom.a - mom.b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Moments, ExactSpanGivesZeroA) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd x_f = randn(2, 40, rng);
  LagDataset d = build_lag_data(x_f, randn(2, 40, rng), 1);
  d.y = randn(2, 2, rng) * d.x_lag;
  EXPECT_LT(moment_matrices(d).a.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Moments, SingularResponsesRejected) {
  std::mt19937_64 rng(5);
  LagDataset d = tsupport::random_dataset(2, 2, 1, 30, rng);
  d.y.row(1) = d.y.row(0);
  EXPECT_THROW(moment_matrices(d), DataError);
}

TEST(NegLogLik, EqualMomentsGiveZero) {
  std::mt19937_64 rng(6);
  const auto psi = StructureParams::from_dvec({1, 1});
  const ConcentratedModel model(equal_moments(2, 3, 2, rng), psi);
  const BlockMatrixG g = tsupport::random_g(psi, 3, rng);
  EXPECT_NEAR(model.neg_log_lik(g), 0.0, 1e-12);
  EXPECT_LT(model.gradient(g).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(model.hessian_bilinear(g, randn(3, 3, rng), randn(3, 3, rng)), 0.0, 1e-9);
}

TEST(NegLogLik, SquareSingleLagIsConstant) {
  std::mt19937_64 rng(7);
  const LagDataset d = tsupport::random_dataset(3, 3, 1, 60, rng);
  const MomentMatrices mom = moment_matrices(d);
  const auto psi = StructureParams::from_pairs({{1, 3}});
  const ConcentratedModel model(mom, psi);
  const double expected = logdet_spd(mom.a) - logdet_spd(mom.b);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(model.neg_log_lik(tsupport::random_g(psi, 3, rng)), expected, 1e-9);
  }
}

TEST(NegLogLik, BoundedByGeneralizedEigenvalues) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = tsupport::uniform_int(1, 3, rng);
    const int p = tsupport::uniform_int(1, 3, rng);
    const auto psi = tsupport::random_structure(m, p, rng);
    const LagDataset d = tsupport::random_dataset(3, m, p, 100, rng);
    const MomentMatrices mom = moment_matrices(d);
    const ConcentratedModel model(mom, psi);
    const Eigen::VectorXd lam = tsupport::generalized_eigenvalues(mom.a, mom.b);
    const int n = psi.mcmillan_degree();
    const double lo = lam.head(n).array().log().sum();
    const double hi = lam.tail(n).array().log().sum();
    const double v = model.neg_log_lik(tsupport::random_g(psi, m, rng));
    EXPECT_GE(v, lo - 1e-9);
    EXPECT_LE(v, hi + 1e-9);
    EXPECT_LE(v, 1e-10);
  }
}

TEST(NegLogLik, CentralizerInvariance) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto psi = tsupport::random_structure(2, 1 + trial % 3, rng);
    const ConcentratedModel model(moment_matrices(tsupport::random_dataset(2, 3, psi.max_lag(), 80, rng)), psi);
    const BlockMatrixG g = tsupport::random_g(psi, 3, rng);
    const Eigen::MatrixXd s = realize_centralizer(tsupport::random_centralizer(psi, rng));
    const double f0 = model.neg_log_lik(g);
    EXPECT_NEAR(model.neg_log_lik(BlockMatrixG(psi, s * g.data())), f0, 1e-9 * std::abs(f0));
  }
}

TEST(NegLogLik, StructureMismatchRejected) {
  std::mt19937_64 rng(10);
  const LagDataset d = tsupport::random_dataset(2, 2, 2, 40, rng);
  EXPECT_THROW(ConcentratedModel(moment_matrices(d), StructureParams::from_dvec({1})), StructureError);
  EXPECT_THROW(ConcentratedModel(moment_matrices(d), StructureParams::from_dvec({0, 3})), StructureError);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = tsupport::uniform_int(1, 4, rng);
    const auto psi =
        tsupport::random_structure(std::min(3, m), tsupport::uniform_int(1, 3, rng), rng);
    const ConcentratedModel model(
        moment_matrices(tsupport::random_dataset(3, m, psi.max_lag(), 120, rng)), psi);
    const BlockMatrixG g = tsupport::random_g(psi, m, rng);
    auto f = [&](const Eigen::MatrixXd& x) { return model.neg_log_lik(BlockMatrixG(psi, x)); };
    const Eigen::MatrixXd grad = model.gradient(g);
    for (int dir = 0; dir < 3; ++dir) {
      const Eigen::MatrixXd eta = randn(g.data().rows(), m, rng);
      const double fd = tsupport::directional_fd(f, g.data(), eta, 1e-6);
      EXPECT_NEAR((grad.array() * eta.array()).sum(), fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Gradient, VanishesAtGeneralizedEigenvector) {
  std::mt19937_64 rng(12);
  const LagDataset d = tsupport::random_dataset(3, 3, 1, 80, rng);
  const MomentMatrices mom = moment_matrices(d);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(mom.a, mom.b);
  const auto psi = StructureParams::from_pairs({{1, 1}});
  const ConcentratedModel model(mom, psi);
  const BlockMatrixG g(psi, es.eigenvectors().col(0).transpose());
  EXPECT_LT(model.gradient(g).norm(), 1e-8);
  EXPECT_NEAR(model.neg_log_lik(g), std::log(es.eigenvalues()(0)), 1e-10);
}

TEST(Hessian, BilinearMatchesAssembledAndSecondDifferences) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    const int m = tsupport::uniform_int(1, 3, rng);
    const auto psi =
        tsupport::random_structure(std::min(2, m), tsupport::uniform_int(1, 3, rng), rng);
    const ConcentratedModel model(
        moment_matrices(tsupport::random_dataset(2, m, psi.max_lag(), 150, rng)), psi);
    const BlockMatrixG g = tsupport::random_g(psi, m, rng);
    const Eigen::Index rows = g.data().rows();
    const Eigen::MatrixXd u = randn(rows, m, rng);
    const Eigen::MatrixXd v = randn(rows, m, rng);
    const double huv = model.hessian_bilinear(g, u, v);
    EXPECT_NEAR(huv, model.hessian_bilinear(g, v, u), 1e-10 * std::max(1.0, std::abs(huv)));
    EXPECT_EQ(model.hessian_bilinear(g, Eigen::MatrixXd::Zero(rows, m), Eigen::MatrixXd::Zero(rows, m)), 0.0);

    Eigen::VectorXd uv(rows * m), vv(rows * m);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        uv(i * m + j) = u(i, j);
        vv(i * m + j) = v(i, j);
      }
    }
    const Eigen::MatrixXd hm = model.hessian_matrix(g);
    EXPECT_NEAR(uv.dot(hm * vv), huv, 1e-9 * std::max(1.0, std::abs(huv)));
    EXPECT_LT((hm - hm.transpose()).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + hm.cwiseAbs().maxCoeff()));

    auto f = [&](const Eigen::MatrixXd& x) { return model.neg_log_lik(BlockMatrixG(psi, x)); };
    const double h = 1e-4;
    const double second = (f(g.data() + h * (u + v)) - f(g.data() + h * (u - v)) -
                           f(g.data() - h * (u - v)) + f(g.data() - h * (u + v))) /
                          (4 * h * h);
    EXPECT_NEAR(huv, second, 1e-4 * std::max(1.0, std::abs(second)));
  }
}

TEST(OptimalH, SingleLagClassicalFormula) {
  std::mt19937_64 rng(14);
  const LagDataset d = tsupport::random_dataset(3, 4, 1, 70, rng);
  const auto psi = StructureParams::from_pairs({{1, 2}});
  const ConcentratedModel model(moment_matrices(d), psi);
  const BlockMatrixG g = tsupport::random_g(psi, 4, rng);
  const Eigen::MatrixXd& x = d.x_lag;
  const Eigen::MatrixXd gm = g.data();
  const Eigen::MatrixXd expected =
      d.y * x.transpose() * gm.transpose() * (gm * x * x.transpose() * gm.transpose()).inverse();
  EXPECT_LT((model.optimal_H(g) - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OptimalH, NoiseFreeRecovery) {
  std::mt19937_64 rng(15);
  const auto psi = StructureParams::from_dvec({1, 1});
  LagDataset d = tsupport::random_dataset(3, 3, 2, 60, rng);
  const BlockMatrixG g = tsupport::random_g(psi, 3, rng);
  const Eigen::MatrixXd h0 = randn(3, psi.mcmillan_degree(), rng);
  d.y = h0 * kappa(g) * d.x_lag;
  const ConcentratedModel model(moment_matrices(d), psi);
  const Eigen::MatrixXd h = model.optimal_H(g);
  EXPECT_LT((h - h0).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(residual_covariance(d, g, h).norm(), 1e-10 * (d.y * d.y.transpose()).norm() / d.t);
}

TEST(OptimalH, NormalEquations) {
  std::mt19937_64 rng(22);
  const auto psi = StructureParams::from_dvec({1, 0, 1});
  const LagDataset d = tsupport::random_dataset(2, 3, 3, 80, rng);
  const ConcentratedModel model(moment_matrices(d), psi);
  const BlockMatrixG g = tsupport::random_g(psi, 3, rng);
  const Eigen::MatrixXd kx = kappa(g) * d.x_lag;
  const Eigen::MatrixXd resid = d.y - model.optimal_H(g) * kx;
  EXPECT_LT((resid * kx.transpose()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ResidualCovariance, SchurIdentityAndZeroH) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = tsupport::random_structure(2, 1 + trial % 3, rng);
    const LagDataset d = tsupport::random_dataset(3, 2, psi.max_lag(), 90, rng);
    const ConcentratedModel model(moment_matrices(d), psi);
    const BlockMatrixG g = tsupport::random_g(psi, 2, rng);
    const Eigen::MatrixXd omega = residual_covariance(d, g, model.optimal_H(g));
    EXPECT_NEAR(logdet_spd(d.t * omega), model.moments().logdet_yy + model.neg_log_lik(g), 1e-8);
    const Eigen::MatrixXd zero_h = Eigen::MatrixXd::Zero(3, psi.mcmillan_degree());
    EXPECT_LT((residual_covariance(d, g, zero_h) - d.y * d.y.transpose() / d.t).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Phi, TwoLagBlocks) {
  std::mt19937_64 rng(17);
  const auto psi = StructureParams::from_pairs({{2, 1}, {1, 1}});
  const BlockMatrixG g = tsupport::random_g(psi, 2, rng);
  const Eigen::MatrixXd h = randn(2, 3, rng);
  const auto phi = phi_from_hfg(h, psi, g);
  const Eigen::MatrixXd h20 = h.col(0), h21 = h.col(1), h10 = h.col(2);
  EXPECT_LT((phi[0] - (h10 * g.block(1, 0) + h20 * g.block(2, 1) + h21 * g.block(2, 0))).norm(), 1e-14);
  EXPECT_LT((phi[1] - h20 * g.block(2, 0)).norm(), 1e-14);
}

TEST(Phi, MatchesMatrixPowers) {
  std::mt19937_64 rng(18);
  for (int k = 1; k <= 4; ++k) {
    for (int m = 1; m <= 4; ++m) {
      for (int p = 1; p <= 3; ++p) {
        for (const auto& psi : enumerate_structures(std::min(k, m), p)) {
          const BlockMatrixG g = tsupport::random_g(psi, m, rng);
          const Eigen::MatrixXd h = randn(k, psi.mcmillan_degree(), rng);
          const auto phi = phi_from_hfg(h, psi, g);
          const Eigen::MatrixXd f = jordan_matrix(psi);
          Eigen::MatrixXd power = Eigen::MatrixXd::Identity(f.rows(), f.cols());
          for (int i = 1; i <= p; ++i) {
            EXPECT_LT((phi[i - 1] - h * power * g.data()).cwiseAbs().maxCoeff(), 1e-12);
            power *= f;
          }
        }
      }
    }
  }
}

TEST(Vrw, UpsilonLayouts) {
  std::mt19937_64 rng(19);
  const Eigen::MatrixXd b0 = randn(2, 3, rng), b1 = randn(2, 3, rng);
  Eigen::MatrixXd single(2, 6);
  single << b1, b0;
  EXPECT_EQ(vrw_upsilon({b0, b1}, 0), single);
  Eigen::MatrixXd banded = Eigen::MatrixXd::Zero(4, 9);
  banded.block(0, 0, 2, 3) = b1;
  banded.block(0, 3, 2, 3) = b0;
  banded.block(2, 3, 2, 3) = b1;
  banded.block(2, 6, 2, 3) = b0;
  EXPECT_EQ(vrw_upsilon({b0, b1}, 1), banded);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd shifted = vrw_upsilon({id}, 2);
  EXPECT_EQ(shifted, Eigen::MatrixXd::Identity(6, 6));
}

TEST(Vrw, ReducesToSingleLagRegression) {
  std::mt19937_64 rng(20);
  const LagDataset d = tsupport::random_dataset(3, 3, 1, 70, rng);
  const MomentMatrices mom = moment_matrices(d);
  const Eigen::MatrixXd b = randn(2, 3, rng);
  const auto psi = StructureParams::from_pairs({{1, 2}});
  const ConcentratedModel model(mom, psi);
  EXPECT_NEAR(vrw_neg_log_lik(mom, {b}, 0), model.neg_log_lik(BlockMatrixG(psi, b)), 1e-12);
  EXPECT_LT((vrw_optimal_A(mom, {b}, 0)[0] - model.optimal_H(BlockMatrixG(psi, b))).norm(), 1e-10);
}

TEST(Vrw, EqualMomentsAndRankCheck) {
  std::mt19937_64 rng(21);
  const MomentMatrices mom = equal_moments(2, 2, 2, rng);
  EXPECT_NEAR(vrw_neg_log_lik(mom, {randn(1, 2, rng)}, 1), 0.0, 1e-12);
  EXPECT_THROW(vrw_neg_log_lik(mom, {Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Zero(1, 2)}, 0),
               RankError);
}
