#include <gtest/gtest.h>

#include "minvarx/errors.hpp"
#include "minvarx/structure.hpp"

using namespace minvarx;

TEST(Structure, DvecToPairs) {
  EXPECT_EQ(StructureParams::from_dvec({0, 1}).pairs(), (std::vector<JordanBlock>{{2, 1}}));
  EXPECT_EQ(StructureParams::from_dvec({1, 0, 1}).pairs(),
            (std::vector<JordanBlock>{{3, 1}, {1, 1}}));
  EXPECT_EQ(StructureParams::from_dvec({2, 2}).pairs(),
            (std::vector<JordanBlock>{{2, 2}, {1, 2}}));
}

TEST(Structure, PairsRoundTrip) {
  for (const auto& psi : enumerate_structures(4, 4)) {
    EXPECT_EQ(StructureParams::from_pairs(psi.pairs()), psi);
  }
}

TEST(Structure, RejectsInvalid) {
  EXPECT_THROW(StructureParams::from_dvec({1, 0}), StructureError);
  EXPECT_THROW(StructureParams::from_dvec({-1, 1}), StructureError);
  EXPECT_THROW(StructureParams::from_dvec({}), StructureError);
  EXPECT_THROW(StructureParams::from_pairs({{1, 1}, {2, 1}}), StructureError);
  EXPECT_THROW(StructureParams::from_pairs({{2, 0}}), StructureError);
}

TEST(Structure, DerivedQuantities) {
  const auto psi = StructureParams::from_pairs({{3, 1}, {1, 1}});
  EXPECT_EQ(psi.max_lag(), 3);
  EXPECT_EQ(psi.total_rank(), 2);
  EXPECT_EQ(mcmillan_degree(psi), 4);
  EXPECT_EQ(mcmillan_degree(StructureParams::from_dvec({2, 2})), 6);
  EXPECT_EQ(mcmillan_degree(StructureParams::from_pairs({{5, 1}})), 5);
  EXPECT_EQ(mcmillan_degree(StructureParams::from_pairs({{3, 4}})), 12);
}

TEST(Structure, RowLayout) {
  const auto psi = StructureParams::from_pairs({{3, 1}, {1, 1}});
  EXPECT_EQ(psi.g_row(3, 2), 0);
  EXPECT_EQ(psi.g_row(3, 1), 1);
  EXPECT_EQ(psi.g_row(3, 0), 2);
  EXPECT_EQ(psi.g_row(1, 0), 3);
  EXPECT_EQ(psi.kappa_row(3, 0), 0);
  EXPECT_EQ(psi.kappa_row(3, 2), 2);
  EXPECT_EQ(psi.lead_rows(), (std::vector<int>{2, 3}));
  EXPECT_THROW(psi.group(2), StructureError);
}

TEST(Structure, EnumerationCounts) {
  EXPECT_EQ(enumerate_structures(2, 2).size(), 3u);
  EXPECT_EQ(enumerate_structures(10, 5).size(), 2002u);
  EXPECT_EQ(enumerate_structures(1, 1).size(), 1u);
  EXPECT_EQ(enumerate_structures(5, 2).size(), 15u);
}

TEST(Structure, EnumerationOrderAndUniqueness) {
  const auto all = enumerate_structures(3, 3);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    std::vector<int> a(all[i].dvec().rbegin(), all[i].dvec().rend());
    std::vector<int> b(all[i + 1].dvec().rbegin(), all[i + 1].dvec().rend());
    EXPECT_GT(a, b);
  }
  for (const auto& psi : all) {
    EXPECT_LE(psi.total_rank(), 3);
    EXPECT_GT(psi.d(3), 0);
  }
}

TEST(Structure, JordanMatrix) {
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 1) = 1.0;
  EXPECT_EQ(jordan_matrix(StructureParams::from_pairs({{2, 1}, {1, 1}})), expected);
  EXPECT_EQ(jordan_matrix(StructureParams::from_pairs({{1, 3}})), Eigen::MatrixXd::Zero(3, 3));
  Eigen::MatrixXd f4 = Eigen::MatrixXd::Zero(4, 4);
  f4(0, 1) = f4(1, 2) = 1.0;
  EXPECT_EQ(jordan_matrix(StructureParams::from_pairs({{3, 1}, {1, 1}})), f4);
}

TEST(Structure, JordanMatrixNilpotencyIndex) {
  for (const auto& psi : enumerate_structures(3, 4)) {
    const Eigen::MatrixXd f = jordan_matrix(psi);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(f.rows(), f.cols());
    for (int i = 1; i < psi.max_lag(); ++i) power *= f;
    EXPECT_GT(power.cwiseAbs().maxCoeff(), 0.0) << psi.to_string();
    EXPECT_EQ((power * f).cwiseAbs().maxCoeff(), 0.0) << psi.to_string();
  }
}

TEST(Structure, ParamReduction) {
  EXPECT_EQ(param_reduction(StructureParams::from_pairs({{1, 2}}), 4, 3), 2);
  EXPECT_EQ(param_reduction(StructureParams::from_pairs({{2, 2}}), 2, 2), 0);
  EXPECT_THROW(param_reduction(StructureParams::from_pairs({{1, 3}}), 2, 5), StructureError);
  for (const auto& psi : enumerate_structures(4, 3)) {
    for (int k = psi.total_rank(); k <= 6; ++k) {
      for (int m = psi.total_rank(); m <= 6; ++m) {
        int weighted = 0, squares = 0;
        for (int j = 1; j <= psi.max_lag(); ++j) {
          weighted += j * psi.d(j);
          squares += psi.tail_rank(j) * psi.tail_rank(j);
        }
        EXPECT_EQ(param_reduction(psi, k, m),
                  psi.max_lag() * m * k - (m + k) * weighted + squares);
      }
    }
  }
}

TEST(Structure, CentralizerDim) {
  EXPECT_EQ(centralizer_dim(StructureParams::from_dvec({1, 1})), 5);
  EXPECT_EQ(centralizer_dim(StructureParams::from_pairs({{1, 3}})), 9);
  EXPECT_EQ(centralizer_dim(StructureParams::from_pairs({{3, 1}, {1, 1}})), 6);
}

TEST(Structure, ToString) {
  EXPECT_EQ(StructureParams::from_dvec({1, 0, 1}).to_string(), "[(3,1),(1,1)]");
}

TEST(Structure, CheckFits) {
  const auto psi = StructureParams::from_dvec({2, 2});
  EXPECT_NO_THROW(psi.check_fits(5, 4));
  EXPECT_THROW(psi.check_fits(3, 5), StructureError);
}
