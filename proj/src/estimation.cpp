#include "minvarx/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "minvarx/errors.hpp"
#include "minvarx/linalg.hpp"
#include "minvarx/optimizer.hpp"
#include "minvarx/scan.hpp"

namespace minvarx {

FitMethod parse_fit_method(const std::string& name) {
  if (name == "newton") return FitMethod::kNewton;
  if (name == "gradient") return FitMethod::kGradient;
  if (name == "grid-scan") return FitMethod::kGridScan;
  throw StructureError("unknown fit method '" + name + "' (expected newton, gradient or grid-scan)");
}

std::string to_string(FitMethod method) {
  switch (method) {
    case FitMethod::kNewton: return "newton";
    case FitMethod::kGradient: return "gradient";
    case FitMethod::kGridScan: return "grid-scan";
  }
  return "newton";
}

Criterion parse_criterion(const std::string& name) {
  if (name == "aic" || name == "AIC") return Criterion::kAic;
  if (name == "bic" || name == "BIC") return Criterion::kBic;
  if (name == "llk-gap") return Criterion::kLlkGap;
  throw StructureError("unknown criterion '" + name + "' (expected aic, bic or llk-gap)");
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::kAic: return "aic";
    case Criterion::kBic: return "bic";
    case Criterion::kLlkGap: return "llk-gap";
  }
  return "bic";
}

namespace {

Eigen::VectorXd to_vec(const Eigen::MatrixXd& g) {
  Eigen::VectorXd v(g.size());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) v(i * g.cols() + j) = g(i, j);
  }
  return v;
}

Eigen::MatrixXd from_vec(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = v(i * cols + j);
  }
  return g;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
// (by index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](int i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

BlockMatrixG random_start(const StructureParams& psi, int m, std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::MatrixXd data(psi.mcmillan_degree(), m);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      for (Eigen::Index j = 0; j < data.cols(); ++j) data(i, j) = normal(rng);
    }
    try {
      return lq_multi_lag(BlockMatrixG(psi, std::move(data))).g_o;
    } catch (const RankError&) {
    }
  }
  throw NumericalError("fit: could not draw a full-rank starting point");
}

struct RunOutcome {
  bool ok = false;
  MinimizeResult res;
};

MinimizeResult run_optimizer(const ConcentratedModel& model, const BlockMatrixG& start,
                             const FitOptions& opts) {
  const auto& psi = model.structure();
  const Eigen::Index rows = start.data().rows();
  const Eigen::Index cols = start.data().cols();
  ObjectiveFn fn = [&](const Eigen::VectorXd& x, bool need_h, double& f, Eigen::VectorXd& g,
                       Eigen::MatrixXd& h) {
    const Derivatives d = model.evaluate(BlockMatrixG(psi, from_vec(x, rows, cols)), need_h);
    f = d.value;
    g = to_vec(d.gradient);
    if (need_h) h = d.hessian;
  };
  RenormalizeFn renorm;
  if (opts.use_lq_normalization) {
    renorm = [&](Eigen::VectorXd& x) {
      try {
        x = to_vec(lq_multi_lag(BlockMatrixG(psi, from_vec(x, rows, cols))).g_o.data());
      } catch (const RankError&) {
      }
    };
  }
  MinimizeOptions mo;
  mo.max_iters = opts.max_iters;
  mo.grad_tol = opts.grad_tol;
  if (opts.method == FitMethod::kGradient) return bfgs(fn, to_vec(start.data()), mo, renorm);
  return damped_newton(fn, to_vec(start.data()), mo, renorm);
}

}  // namespace

FitResult fit(const LagDataset& data, const StructureParams& psi, const FitOptions& opts) {
  psi.check_fits(data.k, data.m);
  if (psi.max_lag() != data.p) {
    throw StructureError("fit: structure " + psi.to_string() + " has p = " +
                         std::to_string(psi.max_lag()) + " but the data were lagged with p = " +
                         std::to_string(data.p));
  }
  if (opts.restarts < 1) throw StructureError("fit: restarts must be >= 1");
  if (!(opts.grad_tol > 0.0)) throw StructureError("fit: grad_tol must be positive");

  const ConcentratedModel model(moment_matrices(data), psi);
  const int m = data.m;

  BlockMatrixG best_g = BlockMatrixG::zeros(psi, m);
  MinimizeResult best;
  int best_index = -1;
  int used = 0;

  if (opts.method == FitMethod::kGridScan) {
    const ScanResult scan = circle_scan(model, opts.scan_points);
    best_g = scan_g(psi, scan.best().t, scan.best().c);
    best.f = scan.best().neg_log_lik;
    best_index = 0;
    used = 1;
  } else {
    const int offset = opts.initial ? 1 : 0;
    const int n = opts.restarts + offset;
    std::vector<RunOutcome> outcomes(n);
    parallel_for(n, opts.threads, [&](int i) {
      BlockMatrixG start = (offset && i == 0) ? *opts.initial
                                              : random_start(psi, m, opts.seed, i - offset);
      if (offset && i == 0 && !(start.structure() == psi)) {
        throw StructureError("fit: initial G does not match the structure");
      }
      try {
        outcomes[i].res = run_optimizer(model, start, opts);
        outcomes[i].ok = std::isfinite(outcomes[i].res.f);
      } catch (const NumericalError&) {
        outcomes[i].ok = false;
      }
    });
    used = n;
    for (int i = 0; i < n; ++i) {
      if (!outcomes[i].ok) continue;
      if (best_index < 0 || outcomes[i].res.f < best.f) {
        best = outcomes[i].res;
        best_index = i;
      }
    }
    if (best_index < 0) throw NumericalError("fit: every start failed for " + psi.to_string());
    best_g = BlockMatrixG(psi, from_vec(best.x, psi.mcmillan_degree(), m));
  }

  if (opts.use_lq_normalization) {
    try {
      best_g = lq_multi_lag(best_g).g_o;
    } catch (const RankError&) {
    }
  }

  FitResult out{psi, best_g, {}, jordan_matrix(psi), {}, {}, 0.0, 0.0, false, false, 0, used,
                best_index, {}, {}};
  const Derivatives d = model.evaluate(out.g, false);
  out.neg_log_lik = d.value;
  out.grad_norm = d.gradient.size() ? d.gradient.cwiseAbs().maxCoeff() : 0.0;
  out.diverged = best.diverged;
  out.converged = !out.diverged && out.grad_norm <= opts.grad_tol;
  out.iterations = best.iterations;
  out.h = model.optimal_H(out.g);
  out.phi = phi_from_hfg(out.h, psi, out.g);
  out.omega = residual_covariance(data, out.g, out.h);
  out.minimality_g = check_minimality_G(out.g);
  out.minimality_h = check_minimality_H(out.h, psi);
  return out;
}

OlsResult full_ols_fit(const LagDataset& data) {
  const MomentMatrices mom = moment_matrices(data);
  Eigen::LLT<Eigen::MatrixXd> llt(mom.b);
  const Eigen::MatrixXd coeff = llt.solve(mom.yx.transpose()).transpose();
  OlsResult out;
  out.phi.resize(data.p);
  for (int c = 0; c < data.p; ++c) out.phi[data.p - 1 - c] = coeff.middleCols(c * data.m, data.m);
  const Eigen::MatrixXd e = data.y - coeff * data.x_lag;
  out.omega = symmetrize(e * e.transpose()) / static_cast<double>(data.t);
  // Exact fits leave A singular; the objective is then unbounded below.
  Eigen::LLT<Eigen::MatrixXd> a_llt(mom.a);
  const bool a_regular = a_llt.info() == Eigen::Success && a_llt.rcond() > 1e-15;
  out.neg_log_lik = a_regular ? logdet_spd(mom.a) - logdet_spd(mom.b)
                              : -std::numeric_limits<double>::infinity();
  return out;
}

int effective_parameters(const StructureParams& psi, int k, int m) {
  return psi.max_lag() * m * k - param_reduction(psi, k, m) + k * (k + 1) / 2;
}

double criterion_value(Criterion c, double neg_log_lik, const MomentMatrices& mom,
                       double ols_neg_log_lik, const StructureParams& psi) {
  if (c == Criterion::kLlkGap) return neg_log_lik - ols_neg_log_lik;
  const double t = static_cast<double>(mom.t);
  const double deviance = t * (mom.logdet_yy - mom.k * std::log(t) + neg_log_lik);
  const double weight = c == Criterion::kAic ? 2.0 : std::log(t);
  return deviance + weight * effective_parameters(psi, mom.k, mom.m);
}

SelectionReport select_structure(const LagDataset& data, int p, Criterion criterion,
                                 const FitOptions& opts,
                                 const std::vector<StructureParams>& subset) {
  if (p != data.p) throw StructureError("select: p differs from the lag of the data");
  const MomentMatrices mom = moment_matrices(data);
  SelectionReport report;
  report.criterion = criterion;
  report.ols_neg_log_lik = full_ols_fit(data).neg_log_lik;

  const std::vector<StructureParams> candidates =
      subset.empty() ? enumerate_structures(std::min(data.k, data.m), p) : subset;
  for (const auto& psi : candidates) {
    SelectionRow row{psi, 0, 0, 0.0, 0.0, false, false, {}};
    row.neg_log_lik = row.criterion = std::numeric_limits<double>::infinity();
    row.mcmillan_degree = psi.mcmillan_degree();
    try {
      row.param_reduction = param_reduction(psi, data.k, data.m);
      const FitResult r = fit(data, psi, opts);
      row.neg_log_lik = r.neg_log_lik;
      row.converged = r.converged;
      row.diverged = r.diverged;
      row.criterion = criterion_value(criterion, r.neg_log_lik, mom, report.ols_neg_log_lik, psi);
    } catch (const Error& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const SelectionRow& a, const SelectionRow& b) {
                     return a.criterion < b.criterion;
                   });
  return report;
}

Eigen::MatrixXd predict(const std::vector<Eigen::MatrixXd>& phi, const Eigen::MatrixXd& x_recent,
                        int steps, bool autoregressive) {
  const int p = static_cast<int>(phi.size());
  if (p == 0) throw StructureError("predict: empty coefficient list");
  const Eigen::Index k = phi[0].rows();
  const Eigen::Index m = phi[0].cols();
  if (steps < 1) throw StructureError("predict: steps must be >= 1");
  if (x_recent.rows() != m || x_recent.cols() < p) {
    throw DataError("predict: need an m x p block of recent regressors (m = " + std::to_string(m) +
                    ", p = " + std::to_string(p) + ")");
  }
  if (steps > 1 && !(autoregressive && k == m)) {
    throw StructureError("predict: multi-step forecasts need an autoregressive model");
  }
  Eigen::MatrixXd window = x_recent.rightCols(p);
  Eigen::MatrixXd out(k, steps);
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    for (int i = 1; i <= p; ++i) y += phi[i - 1] * window.col(p - i);
    out.col(s) = y;
    if (s + 1 < steps) {
      Eigen::MatrixXd next(m, p);
      next.leftCols(p - 1) = window.rightCols(p - 1);
      next.col(p - 1) = y;
      window = next;
    }
  }
  return out;
}

}  // namespace minvarx
