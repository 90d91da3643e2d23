#include "minvarx/simulation.hpp"

#include <cmath>
#include <random>

#include "minvarx/errors.hpp"
#include "minvarx/likelihood.hpp"

namespace minvarx {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = normal(rng);
  }
  return out;
}

}  // namespace

StabilityReport is_stable(const std::vector<Eigen::MatrixXd>& phi, double margin) {
  if (phi.empty()) throw StructureError("is_stable: empty coefficient list");
  const Eigen::Index k = phi[0].rows();
  const int p = static_cast<int>(phi.size());
  for (const auto& c : phi) {
    if (c.rows() != k || c.cols() != k) throw StructureError("is_stable: coefficients must be square");
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p * k, p * k);
  for (int i = 0; i < p; ++i) companion.block(0, i * k, k, k) = phi[i];
  if (p > 1) companion.bottomLeftCorner((p - 1) * k, (p - 1) * k).setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
  if (eig.info() != Eigen::Success) throw NumericalError("is_stable: eigenvalue computation failed");
  StabilityReport rep;
  rep.spectral_radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  rep.stable = rep.spectral_radius < 1.0 - margin;
  return rep;
}

GeneratedModel random_stable_model(const StructureParams& psi, int k, int m, std::uint64_t seed,
                                   double target_radius,
                                   const std::optional<Eigen::MatrixXd>& omega) {
  psi.check_fits(k, m);
  if (!(target_radius > 0.0 && target_radius < 1.0)) {
    throw StructureError("random_stable_model: target radius must lie in (0, 1)");
  }
  Eigen::MatrixXd omega_gen = omega ? *omega : Eigen::MatrixXd::Identity(k, k);
  if (omega_gen.rows() != k || omega_gen.cols() != k ||
      Eigen::LLT<Eigen::MatrixXd>(omega_gen).info() != Eigen::Success) {
    throw StructureError("random_stable_model: noise covariance must be k x k and positive definite");
  }

  std::mt19937_64 rng = make_rng(seed, 0x6d6f64u);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::MatrixXd h = normal_matrix(k, psi.mcmillan_degree(), rng);
    BlockMatrixG g(psi, normal_matrix(psi.mcmillan_degree(), m, rng));
    try {
      g = lq_multi_lag(g).g_o;
    } catch (const RankError&) {
      continue;
    }
    if (!check_minimality_G(g).pass || !check_minimality_H(h, psi).pass) continue;

    std::vector<Eigen::MatrixXd> phi = phi_from_hfg(h, psi, g);
    if (k == m) {
      // Phi is linear in H; shrink until the companion radius reaches the target.
      bool ok = false;
      for (int iter = 0; iter < 200; ++iter) {
        const double rho = is_stable(phi).spectral_radius;
        if (rho <= target_radius) {
          ok = true;
          break;
        }
        h *= std::pow(target_radius / rho, psi.max_lag());
        phi = phi_from_hfg(h, psi, g);
      }
      if (!ok) continue;
    }
    return GeneratedModel{psi, h, jordan_matrix(psi), g, phi, omega_gen, seed};
  }
  throw NumericalError("random_stable_model: no admissible draw after 1000 attempts");
}

SimulatedData simulate(const GeneratedModel& model, int t, std::uint64_t seed, int burn_in,
                       bool autoregressive) {
  if (t < 1) throw DataError("simulate: T must be positive");
  if (burn_in < 0) throw DataError("simulate: burn-in must be non-negative");
  const int p = static_cast<int>(model.phi.size());
  const Eigen::Index k = model.phi[0].rows();
  const Eigen::Index m = model.phi[0].cols();
  if (autoregressive) {
    if (k != m) throw StructureError("simulate: autoregressive mode needs k = m");
    if (!is_stable(model.phi).stable) {
      throw NumericalError("simulate: the model is not stable");
    }
  }
  const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(model.omega).matrixL();
  std::mt19937_64 rng = make_rng(seed, 0x73696du);

  const int total = burn_in + t;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(k, total);
  Eigen::MatrixXd x;
  if (!autoregressive) x = normal_matrix(m, total, rng);
  const Eigen::MatrixXd noise = chol * normal_matrix(k, total, rng);
  for (int s = 0; s < total; ++s) {
    Eigen::VectorXd v = noise.col(s);
    for (int i = 1; i <= p && i <= s; ++i) {
      v += model.phi[i - 1] * (autoregressive ? y.col(s - i) : x.col(s - i));
    }
    y.col(s) = v;
  }
  SimulatedData out;
  out.y_f = y.rightCols(t);
  out.x_f = autoregressive ? out.y_f : Eigen::MatrixXd(x.rightCols(t));
  return out;
}

}  // namespace minvarx
