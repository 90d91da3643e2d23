#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "minvarx/blockops.hpp"
#include "minvarx/structure.hpp"

namespace minvarx {

struct GeneratedModel {
  StructureParams structure;
  Eigen::MatrixXd h;
  Eigen::MatrixXd f;
  BlockMatrixG g;
  std::vector<Eigen::MatrixXd> phi;
  Eigen::MatrixXd omega;
  std::uint64_t seed = 0;
};

struct StabilityReport {
  bool stable = false;
  double spectral_radius = 0.0;
};

/// Companion-matrix stability of y_t = sum_i Phi_i y_{t-i}; stable when the
/// spectral radius is below 1 - margin. Throws StructureError for
/// non-square coefficients.
StabilityReport is_stable(const std::vector<Eigen::MatrixXd>& phi, double margin = 1e-8);

/// A random minimal model with structure psi. G is LQ-normalized. When k = m
/// the coefficients are shrunk until the companion spectral radius is at most
/// target_radius. Deterministic in the seed.
GeneratedModel random_stable_model(const StructureParams& psi, int k, int m, std::uint64_t seed,
                                   double target_radius = 0.7,
                                   const std::optional<Eigen::MatrixXd>& omega = std::nullopt);

struct SimulatedData {
  Eigen::MatrixXd y_f;  // k x T
  Eigen::MatrixXd x_f;  // m x T
};

/// Simulates T samples after discarding burn_in. In autoregressive mode
/// X_f = Y_f (requires k = m and a stable model); otherwise X_f is i.i.d.
/// standard normal.
SimulatedData simulate(const GeneratedModel& model, int t, std::uint64_t seed, int burn_in = 100,
                       bool autoregressive = true);

}  // namespace minvarx
