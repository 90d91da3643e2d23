#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "minvarx/blockops.hpp"
#include "minvarx/likelihood.hpp"
#include "minvarx/structure.hpp"

namespace minvarx::tsupport {

inline Eigen::MatrixXd randn(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

inline int uniform_int(int lo, int hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// A structure with total rank <= h and maximal lag exactly p.
inline StructureParams random_structure(int h, int p, std::mt19937_64& rng) {
  const auto all = enumerate_structures(h, p);
  return all[static_cast<std::size_t>(uniform_int(0, static_cast<int>(all.size()) - 1, rng))];
}

inline BlockMatrixG random_g(const StructureParams& psi, int m, std::mt19937_64& rng) {
  return BlockMatrixG(psi, randn(psi.mcmillan_degree(), m, rng));
}

/// A random invertible centralizer element (lead walls close to the identity).
inline CentralizerElement random_centralizer(const StructureParams& psi, std::mt19937_64& rng) {
  CentralizerElement s(psi);
  for (const auto& ga : psi.groups()) {
    for (const auto& gb : psi.groups()) {
      for (int j = CentralizerElement::min_wall_index(ga.exponent, gb.exponent); j < ga.exponent;
           ++j) {
        s.wall(ga.exponent, gb.exponent, j) = 0.3 * randn(ga.sub_rank, gb.sub_rank, rng);
      }
    }
    s.wall(ga.exponent, ga.exponent, 0) += Eigen::MatrixXd::Identity(ga.sub_rank, ga.sub_rank);
  }
  return s;
}

/// Random regression data: X_f i.i.d. normal, Y_f a random lagged map of X_f
/// plus unit noise.
inline LagDataset random_dataset(int k, int m, int p, int t, std::mt19937_64& rng) {
  const Eigen::MatrixXd x_f = randn(m, t + p, rng);
  Eigen::MatrixXd y_f = randn(k, t + p, rng);
  const Eigen::MatrixXd coeff = 0.5 * randn(k, p * m, rng);
  for (int s = p; s < t + p; ++s) {
    for (int i = 1; i <= p; ++i) {
      y_f.col(s) += coeff.middleCols((i - 1) * m, m) * x_f.col(s - i);
    }
  }
  return build_lag_data(x_f, y_f, p);
}

/// Ascending generalized eigenvalues of A v = lambda B v.
inline Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Dimension of {M : M F = F M}, from the nullity of I (x) F - F' (x) I.
inline int brute_force_centralizer_dim(const Eigen::MatrixXd& f) {
  const Eigen::Index n = f.rows();
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n * n, n * n);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) = id(i, j) * f - f(j, i) * id;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
  return static_cast<int>(lu.dimensionOfKernel());
}

/// Central difference of f along eta.
template <typename Fn>
double directional_fd(Fn&& f, const Eigen::MatrixXd& x, const Eigen::MatrixXd& eta, double h) {
  return (f(x + h * eta) - f(x - h * eta)) / (2.0 * h);
}

}  // namespace minvarx::tsupport
