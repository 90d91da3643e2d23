#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "minvarx/blockops.hpp"
#include "minvarx/likelihood.hpp"
#include "minvarx/structure.hpp"

namespace minvarx {

enum class FitMethod { kNewton, kGradient, kGridScan };

FitMethod parse_fit_method(const std::string& name);
std::string to_string(FitMethod method);

struct FitOptions {
  FitMethod method = FitMethod::kNewton;
  int restarts = 5;
  int max_iters = 500;
  double grad_tol = 1e-8;
  std::uint64_t seed = 0;
  bool use_lq_normalization = true;
  int threads = 1;
  /// Extra starting point tried before the random restarts.
  std::optional<BlockMatrixG> initial;
  /// Grid resolution for the grid-scan method.
  int scan_points = 2000;
};

struct FitResult {
  StructureParams structure;
  BlockMatrixG g;
  Eigen::MatrixXd h;
  Eigen::MatrixXd f;
  std::vector<Eigen::MatrixXd> phi;
  Eigen::MatrixXd omega;
  double neg_log_lik = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  int restarts_used = 0;
  int best_restart = -1;
  RankReport minimality_g;
  RankReport minimality_h;
};

/// Maximizes the concentrated likelihood over G; returns the best of
/// opts.restarts independent starts (plus opts.initial if given). Ties go to
/// the earliest start.
FitResult fit(const LagDataset& data, const StructureParams& psi, const FitOptions& opts);

struct OlsResult {
  std::vector<Eigen::MatrixXd> phi;
  Eigen::MatrixXd omega;
  double neg_log_lik = 0.0;
};

/// Unrestricted least squares of Y on X_lag.
OlsResult full_ols_fit(const LagDataset& data);

enum class Criterion { kAic, kBic, kLlkGap };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion c);

struct SelectionRow {
  StructureParams structure;
  int mcmillan_degree = 0;
  int param_reduction = 0;
  double neg_log_lik = std::numeric_limits<double>::infinity();
  double criterion = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool diverged = false;
  std::string error;
};

struct SelectionReport {
  Criterion criterion = Criterion::kBic;
  double ols_neg_log_lik = 0.0;
  std::vector<SelectionRow> rows;  // ascending by criterion
};

/// Effective parameter count p m k - param_reduction + k (k + 1) / 2.
int effective_parameters(const StructureParams& psi, int k, int m);

/// Value of the criterion for a fitted objective.
double criterion_value(Criterion c, double neg_log_lik, const MomentMatrices& mom,
                       double ols_neg_log_lik, const StructureParams& psi);

/// Fits every structure of enumerate_structures(min(k, m), p), or the given
/// subset, and ranks them. Individual fit failures are recorded per row.
SelectionReport select_structure(const LagDataset& data, int p, Criterion criterion,
                                 const FitOptions& opts,
                                 const std::vector<StructureParams>& subset = {});

/// Forecast from the p most recent regressor samples (m x p, newest last).
/// With steps > 1 the model must be autoregressive and forecasts are fed back.
Eigen::MatrixXd predict(const std::vector<Eigen::MatrixXd>& phi, const Eigen::MatrixXd& x_recent,
                        int steps, bool autoregressive);

}  // namespace minvarx
