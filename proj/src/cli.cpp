#include "minvarx/cli.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "minvarx/blockops.hpp"
#include "minvarx/errors.hpp"
#include "minvarx/estimation.hpp"
#include "minvarx/io.hpp"
#include "minvarx/likelihood.hpp"
#include "minvarx/scan.hpp"
#include "minvarx/simulation.hpp"
#include "minvarx/structure.hpp"

namespace minvarx::cli {

namespace {

using io::Json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output = "-";
  std::string format = "json";
};

struct StructureArgs {
  std::string psi;
  std::string dvec;

  StructureParams get() const {
    if (!psi.empty() && !dvec.empty()) throw UsageError("give either --psi or --dvec, not both");
    if (!psi.empty()) return io::parse_structure(psi);
    if (!dvec.empty()) return io::parse_dvec(dvec);
    throw UsageError("a structure is required (--psi or --dvec)");
  }
};

struct DataArgs {
  std::string y_path;
  std::string x_path;
  bool autoregressive = false;
};

struct FitArgs {
  std::string method = "newton";
  int restarts = 5;
  int max_iters = 500;
  double grad_tol = 1e-8;
  bool no_lq = false;

  FitOptions options(const Globals& g) const {
    FitOptions o;
    o.method = parse_fit_method(method);
    o.restarts = restarts;
    o.max_iters = max_iters;
    o.grad_tol = grad_tol;
    o.seed = g.seed;
    o.threads = g.threads;
    o.use_lq_normalization = !no_lq;
    return o;
  }
};

void add_structure_options(CLI::App* cmd, StructureArgs& s) {
  cmd->add_option("--psi", s.psi, "Structure as (exponent, sub-rank) pairs, e.g. \"[(2,1),(1,1)]\"");
  cmd->add_option("--dvec", s.dvec, "Structure as d_1,...,d_p");
}

void add_data_options(CLI::App* cmd, DataArgs& d) {
  cmd->add_option("--y", d.y_path, "CSV of responses (rows = time, header required)")->required();
  cmd->add_option("--x", d.x_path, "CSV of regressors (rows = time, header required)");
  cmd->add_flag("--autoregressive", d.autoregressive, "Use the responses as regressors (X = Y)");
}

void add_fit_options(CLI::App* cmd, FitArgs& f) {
  cmd->add_option("--method", f.method, "newton, gradient or grid-scan")->capture_default_str();
  cmd->add_option("--restarts", f.restarts, "Number of random starts")->capture_default_str();
  cmd->add_option("--max-iters", f.max_iters, "Iteration limit per start")->capture_default_str();
  cmd->add_option("--grad-tol", f.grad_tol, "Gradient max-norm tolerance")->capture_default_str();
  cmd->add_flag("--no-lq", f.no_lq, "Disable periodic LQ re-normalization");
}

// Returns (Y_f, X_f) as series x time.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> load_data(const DataArgs& d) {
  if (d.autoregressive == !d.x_path.empty()) {
    throw UsageError("give exactly one of --x and --autoregressive");
  }
  const io::CsvTable y = io::read_csv(d.y_path);
  Eigen::MatrixXd y_f = y.data.transpose();
  if (d.autoregressive) return {y_f, y_f};
  const io::CsvTable x = io::read_csv(d.x_path);
  if (x.data.rows() != y.data.rows()) {
    throw DataError("Y has " + std::to_string(y.data.rows()) + " samples but X has " +
                    std::to_string(x.data.rows()));
  }
  return {y_f, x.data.transpose()};
}

void emit(const Globals& g, const std::string& contents) {
  if (g.output == "-") {
    std::cout << contents << std::flush;
  } else {
    io::write_file_atomic(g.output, contents);
  }
}

// Human-readable summaries go to stdout unless stdout carries the result.
std::ostream& summary_stream(const Globals& g) { return g.output == "-" ? std::cerr : std::cout; }

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

std::string dvec_string(const StructureParams& psi) {
  std::string out;
  for (std::size_t i = 0; i < psi.dvec().size(); ++i) {
    if (i) out += ';';
    out += std::to_string(psi.dvec()[i]);
  }
  return out;
}

void check_format(const Globals& g) {
  if (g.format != "json" && g.format != "csv") throw UsageError("--format must be json or csv");
}

// ---------------------------------------------------------------------------

int cmd_enumerate(const Globals& g, int h, int p, int k, int m) {
  if (h < 1 || p < 1) throw UsageError("--h and --p must be positive");
  if ((k > 0) != (m > 0)) throw UsageError("give both --k and --m or neither");
  const auto all = enumerate_structures(h, p);
  const bool with_reduction = k > 0;
  if (with_reduction && h > std::min(k, m)) throw UsageError("--h exceeds min(k, m)");

  if (g.format == "csv") {
    std::string out = "index,structure,dvec,mcmillan_degree,centralizer_dim";
    if (with_reduction) out += ",param_reduction";
    out += '\n';
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& psi = all[i];
      out += std::to_string(i) + "," + csv_quote(psi.to_string()) + "," + dvec_string(psi) + "," +
             std::to_string(psi.mcmillan_degree()) + "," + std::to_string(centralizer_dim(psi));
      if (with_reduction) out += "," + std::to_string(param_reduction(psi, k, m));
      out += '\n';
    }
    emit(g, out);
  } else {
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["kind"] = "enumeration";
    j["h"] = h;
    j["p"] = p;
    j["count"] = all.size();
    Json rows = Json::array();
    for (std::size_t i = 0; i < all.size(); ++i) {
      Json row;
      row["index"] = i;
      row["structure"] = io::structure_to_json(all[i]);
      row["mcmillan_degree"] = all[i].mcmillan_degree();
      row["centralizer_dim"] = centralizer_dim(all[i]);
      if (with_reduction) row["param_reduction"] = param_reduction(all[i], k, m);
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    emit(g, io::dump(j));
  }
  return kOk;
}

int cmd_simulate(const Globals& g, const StructureArgs& s, int k, int m, int t, int burn_in,
                 bool exogenous, double radius, const std::string& y_out,
                 const std::string& x_out) {
  const StructureParams psi = s.get();
  if (k < 1) throw UsageError("--k must be positive");
  if (m < 1) m = k;
  if (!exogenous && m != k) throw UsageError("autoregressive simulation needs m = k");
  if (y_out.empty()) throw UsageError("--y-out is required");
  if (exogenous && x_out.empty()) throw UsageError("--x-out is required with --exogenous");
  if (t < 1 || burn_in < 0) throw UsageError("--T must be positive and --burn-in non-negative");
  psi.check_fits(k, m);

  const GeneratedModel model = random_stable_model(psi, k, m, g.seed, radius);
  const SimulatedData data = simulate(model, t, g.seed, burn_in, !exogenous);

  std::vector<std::string> yh, xh;
  for (int i = 1; i <= k; ++i) yh.push_back("y" + std::to_string(i));
  for (int i = 1; i <= m; ++i) xh.push_back("x" + std::to_string(i));
  const std::string y_csv = io::format_csv(yh, data.y_f.transpose());
  const std::string x_csv = exogenous ? io::format_csv(xh, data.x_f.transpose()) : std::string();
  Json j = io::model_to_json(model);
  j["autoregressive"] = !exogenous;
  j["T"] = t;
  j["burn_in"] = burn_in;

  io::write_file_atomic(y_out, y_csv);
  if (exogenous) io::write_file_atomic(x_out, x_csv);
  emit(g, io::dump(j));
  summary_stream(g) << "simulated " << t << " samples from " << psi.to_string()
                    << " (spectral radius "
                    << (k == m ? io::format_double(is_stable(model.phi).spectral_radius) : "n/a")
                    << ")\n";
  return kOk;
}

int cmd_fit(const Globals& g, const StructureArgs& s, const DataArgs& d, const FitArgs& f, int p,
            bool full_ols) {
  const FitOptions opts = f.options(g);
  std::optional<StructureParams> psi;
  if (!full_ols) {
    psi = s.get();
    if (p > 0 && p != psi->max_lag()) throw UsageError("--p differs from the structure's maximal lag");
    p = psi->max_lag();
  } else if (p < 1) {
    throw UsageError("--full-ols needs --p");
  }
  const auto [y_f, x_f] = load_data(d);
  if (psi) psi->check_fits(static_cast<int>(y_f.rows()), static_cast<int>(x_f.rows()));
  const LagDataset data = build_lag_data(x_f, y_f, p);

  if (full_ols) {
    const OlsResult r = full_ols_fit(data);
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["kind"] = "ols";
    j["p"] = p;
    j["autoregressive"] = d.autoregressive;
    j["neg_log_lik"] = r.neg_log_lik;
    Json phi = Json::array();
    for (const auto& m : r.phi) phi.push_back(io::matrix_to_json(m));
    j["phi"] = std::move(phi);
    j["omega"] = io::matrix_to_json(r.omega);
    emit(g, io::dump(j));
    summary_stream(g) << "full OLS  p=" << p << "  neg_log_lik=" << io::format_double(r.neg_log_lik)
                      << "\n";
    return kOk;
  }

  const FitResult r = fit(data, *psi, opts);
  emit(g, io::dump(io::fit_result_to_json(r, d.autoregressive)));
  auto& os = summary_stream(g);
  os << "structure " << psi->to_string() << "  n_min=" << psi->mcmillan_degree()
     << "  neg_log_lik=" << io::format_double(r.neg_log_lik)
     << "  converged=" << (r.converged ? "true" : "false")
     << "  diverged=" << (r.diverged ? "true" : "false") << "\n"
     << "minimality  rank(G0)=" << r.minimality_g.rank << "/" << r.minimality_g.expected
     << "  rank(H0)=" << r.minimality_h.rank << "/" << r.minimality_h.expected << "\n";
  if (r.diverged) {
    std::cerr << "error: the optimizer diverged (entries of G exceeded the bound); the minimum may "
                 "lie at infinity for this structure\n";
    return kNumericalError;
  }
  return kOk;
}

int cmd_select(const Globals& g, const DataArgs& d, const FitArgs& f, int p,
               const std::string& criterion, const std::string& structures) {
  if (p < 1) throw UsageError("--p must be positive");
  const FitOptions opts = f.options(g);
  const Criterion crit = parse_criterion(criterion);
  std::vector<StructureParams> subset;
  if (!structures.empty()) {
    std::stringstream ss(structures);
    std::string item;
    while (std::getline(ss, item, ';')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      subset.push_back(io::parse_structure(item));
    }
  }
  const auto [y_f, x_f] = load_data(d);
  for (const auto& psi : subset) {
    psi.check_fits(static_cast<int>(y_f.rows()), static_cast<int>(x_f.rows()));
  }
  const LagDataset data = build_lag_data(x_f, y_f, p);
  const SelectionReport rep = select_structure(data, p, crit, opts, subset);

  if (g.format == "csv") {
    std::string out =
        "rank,structure,dvec,mcmillan_degree,param_reduction,neg_log_lik,criterion,converged,"
        "diverged\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      out += std::to_string(i) + "," + csv_quote(r.structure.to_string()) + "," +
             dvec_string(r.structure) + "," + std::to_string(r.mcmillan_degree) + "," +
             std::to_string(r.param_reduction) + "," + io::format_double(r.neg_log_lik) + "," +
             io::format_double(r.criterion) + "," + (r.converged ? "true" : "false") + "," +
             (r.diverged ? "true" : "false") + "\n";
    }
    emit(g, out);
  } else {
    emit(g, io::dump(io::selection_to_json(rep)));
  }
  auto& os = summary_stream(g);
  os << rep.rows.size() << " structures ranked by " << to_string(crit)
     << "; full OLS neg_log_lik=" << io::format_double(rep.ols_neg_log_lik) << "\n";
  if (!rep.rows.empty()) os << "best: " << rep.rows.front().structure.to_string() << "\n";
  return kOk;
}

int cmd_predict(const Globals& g, const std::string& model_path, const DataArgs& d, int steps) {
  if (model_path.empty()) throw UsageError("--model is required");
  Json j;
  try {
    j = Json::parse(io::read_file(model_path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(model_path + ": " + e.what());
  }
  std::vector<Eigen::MatrixXd> phi;
  bool autoregressive = true;
  try {
    for (const auto& m : j.at("phi")) phi.push_back(io::matrix_from_json(m));
    if (j.contains("autoregressive")) autoregressive = j.at("autoregressive").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(model_path + ": " + e.what());
  }
  if (phi.empty()) throw DataError(model_path + ": no coefficients");
  const int p = static_cast<int>(phi.size());

  DataArgs da = d;
  if (autoregressive && !da.x_path.empty()) {
    throw UsageError("the model is autoregressive; --x must not be given");
  }
  da.autoregressive = autoregressive;
  if (!autoregressive && da.x_path.empty()) throw UsageError("the model is exogenous; give --x");
  const auto [y_f, x_f] = load_data(da);
  if (x_f.cols() < p) throw DataError("need at least p = " + std::to_string(p) + " samples");
  const Eigen::MatrixXd forecast = predict(phi, x_f.rightCols(p), steps, autoregressive);

  if (g.format == "csv") {
    std::vector<std::string> header{"step"};
    for (Eigen::Index i = 1; i <= forecast.rows(); ++i) header.push_back("y" + std::to_string(i));
    Eigen::MatrixXd rows(forecast.cols(), forecast.rows() + 1);
    for (Eigen::Index s = 0; s < forecast.cols(); ++s) {
      rows(s, 0) = static_cast<double>(s + 1);
      rows.row(s).tail(forecast.rows()) = forecast.col(s).transpose();
    }
    emit(g, io::format_csv(header, rows));
  } else {
    Json out;
    out["schema_version"] = io::kSchemaVersion;
    out["kind"] = "forecast";
    out["steps"] = steps;
    out["forecast"] = io::matrix_to_json(forecast);
    emit(g, io::dump(out));
  }
  return kOk;
}

int cmd_lq(const Globals& g, const std::string& input, const StructureArgs& s) {
  if (input.empty()) throw UsageError("--input is required");
  Json j;
  try {
    j = Json::parse(io::read_file(input));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(input + ": " + e.what());
  }
  StructureParams psi = (!s.psi.empty() || !s.dvec.empty())
                            ? s.get()
                            : (j.contains("structure") ? io::structure_from_json(j.at("structure"))
                                                       : throw UsageError("no structure given"));
  if (!j.contains("G")) throw DataError(input + ": missing \"G\"");
  const BlockMatrixG gm(psi, io::matrix_from_json(j.at("G")));
  const LqResult lq = lq_multi_lag(gm);
  const OrthoParam op = parameterize(lq.g_o);

  Json out;
  out["schema_version"] = io::kSchemaVersion;
  out["kind"] = "lq";
  out["structure"] = io::structure_to_json(psi);
  out["G"] = io::matrix_to_json(gm.data());
  out["G_o"] = io::matrix_to_json(lq.g_o.data());
  out["S"] = io::matrix_to_json(realize_centralizer(lq.s));
  Json walls = Json::array();
  for (const auto& ga : psi.groups()) {
    for (const auto& gb : psi.groups()) {
      for (int jj = CentralizerElement::min_wall_index(ga.exponent, gb.exponent); jj < ga.exponent;
           ++jj) {
        walls.push_back(Json{{"rho1", ga.exponent},
                             {"rho2", gb.exponent},
                             {"j", jj},
                             {"block", io::matrix_to_json(lq.s.wall(ga.exponent, gb.exponent, jj))}});
      }
    }
  }
  out["walls"] = std::move(walls);
  out["relation_residual"] = lq_relation_residual(lq.g_o);
  Json coeffs = Json::array();
  for (const auto& [key, c] : op.c) {
    coeffs.push_back(Json{{"r", key.first}, {"l", key.second}, {"C", io::matrix_to_json(c)}});
  }
  out["O"] = io::matrix_to_json(op.o);
  out["C"] = std::move(coeffs);
  emit(g, io::dump(out));

  auto& os = summary_stream(g);
  const Eigen::IOFormat fmt(6, 0, ", ", "\n", "  [", "]");
  os << "G_o =\n" << lq.g_o.data().format(fmt) << "\nS =\n"
     << realize_centralizer(lq.s).format(fmt) << "\n";
  return kOk;
}

int cmd_scan(const Globals& g, const StructureArgs& s, const DataArgs& d, int points, bool surface,
             int c_points, double c_min, double c_max) {
  const StructureParams psi = s.get();
  const auto [y_f, x_f] = load_data(d);
  if (x_f.rows() != 2) throw UsageError("scan needs m = 2 regressors");
  const int n_tan = scan_tangent_count(psi, 2);
  psi.check_fits(static_cast<int>(y_f.rows()), 2);
  const LagDataset data = build_lag_data(x_f, y_f, psi.max_lag());
  const ConcentratedModel model(moment_matrices(data), psi);
  if (points < 1) throw UsageError("--points must be positive");
  const ScanResult res =
      surface ? surface_scan(model, points, c_points, c_min, c_max) : circle_scan(model, points);

  if (g.format == "csv") {
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= n_tan; ++i) header.push_back("c" + std::to_string(i));
    header.push_back("neg_log_lik");
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(res.points.size()), n_tan + 2);
    for (std::size_t i = 0; i < res.points.size(); ++i) {
      const auto& pt = res.points[i];
      rows(i, 0) = pt.t;
      for (int c = 0; c < n_tan; ++c) rows(i, 1 + c) = pt.c(c);
      rows(i, n_tan + 1) = pt.neg_log_lik;
    }
    emit(g, io::format_csv(header, rows));
  } else {
    Json out;
    out["schema_version"] = io::kSchemaVersion;
    out["kind"] = surface ? "surface_scan" : "circle_scan";
    out["structure"] = io::structure_to_json(psi);
    auto point_json = [](const ScanPoint& pt) {
      Json c = Json::array();
      for (Eigen::Index i = 0; i < pt.c.size(); ++i) c.push_back(pt.c(i));
      return Json{{"t", pt.t}, {"c", std::move(c)}, {"neg_log_lik", pt.neg_log_lik}};
    };
    out["best"] = point_json(res.best());
    Json pts = Json::array();
    for (const auto& pt : res.points) pts.push_back(point_json(pt));
    out["points"] = std::move(pts);
    emit(g, io::dump(out));
  }
  summary_stream(g) << "scan minimum " << io::format_double(res.best().neg_log_lik) << " at t="
                    << io::format_double(res.best().t) << "\n";
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"minvarx: minimal state-space VARX estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for restarts")->capture_default_str();
  app.add_option("--output", g.output, "Output path ('-' for stdout)")->capture_default_str();
  app.add_option("--format", g.format, "json or csv")->capture_default_str();

  int h = 0, p = 0, k = 0, m = 0;
  auto* enumerate = app.add_subcommand("enumerate", "List all structures for (h, p)");
  enumerate->set_help_flag("--help", "Print this help message and exit");
  enumerate->add_option("--h", h, "Rank bound min(k, m)")->required();
  enumerate->add_option("--p", p, "Maximal lag")->required();
  enumerate->add_option("--k", k, "Response dimension (enables param_reduction)");
  enumerate->add_option("--m", m, "Regressor dimension (enables param_reduction)");

  StructureArgs sim_s;
  int sim_k = 0, sim_m = 0, sim_t = 1000, burn_in = 100;
  bool exogenous = false;
  double radius = 0.7;
  std::string y_out, x_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a random stable model and data");
  add_structure_options(simulate_cmd, sim_s);
  simulate_cmd->add_option("--k", sim_k, "Response dimension")->required();
  simulate_cmd->add_option("--m", sim_m, "Regressor dimension (default k)");
  simulate_cmd->add_option("--T", sim_t, "Number of samples")->capture_default_str();
  simulate_cmd->add_option("--burn-in", burn_in, "Discarded initial samples")->capture_default_str();
  simulate_cmd->add_flag("--exogenous", exogenous, "Draw i.i.d. regressors instead of X = Y");
  simulate_cmd->add_option("--radius", radius, "Target companion spectral radius")->capture_default_str();
  simulate_cmd->add_option("--y-out", y_out, "CSV path for the responses");
  simulate_cmd->add_option("--x-out", x_out, "CSV path for the regressors (exogenous mode)");

  StructureArgs fit_s;
  DataArgs fit_d;
  FitArgs fit_f;
  int fit_p = 0;
  bool full_ols = false;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a structure by maximum likelihood");
  add_structure_options(fit_cmd, fit_s);
  add_data_options(fit_cmd, fit_d);
  add_fit_options(fit_cmd, fit_f);
  fit_cmd->add_option("--p", fit_p, "Maximal lag (defaults to the structure's)");
  fit_cmd->add_flag("--full-ols", full_ols, "Fit the unrestricted VARX(p) by least squares");

  DataArgs sel_d;
  FitArgs sel_f;
  int sel_p = 0;
  std::string criterion = "bic", structures;
  auto* select_cmd = app.add_subcommand("select", "Fit and rank all structures for a lag p");
  add_data_options(select_cmd, sel_d);
  add_fit_options(select_cmd, sel_f);
  select_cmd->add_option("--p", sel_p, "Maximal lag")->required();
  select_cmd->add_option("--criterion", criterion, "aic, bic or llk-gap")->capture_default_str();
  select_cmd->add_option("--structures", structures,
                         "Semicolon-separated subset, e.g. \"[(2,1)];[(2,1),(1,1)]\"");

  std::string model_path;
  std::string pred_y, pred_x;
  int steps = 1;
  auto* predict_cmd = app.add_subcommand("predict", "Forecast from a fitted or generated model");
  predict_cmd->add_option("--model", model_path, "Fit or model JSON")->required();
  predict_cmd->add_option("--y", pred_y, "CSV of recent responses")->required();
  predict_cmd->add_option("--x", pred_x, "CSV of recent regressors (exogenous models)");
  predict_cmd->add_option("--steps", steps, "Forecast horizon")->capture_default_str();

  std::string lq_input;
  StructureArgs lq_s;
  auto* lq_cmd = app.add_subcommand("lq", "Generalized LQ normalization of a G matrix");
  lq_cmd->add_option("--input", lq_input, "JSON with \"structure\" and \"G\"")->required();
  add_structure_options(lq_cmd, lq_s);

  StructureArgs scan_s;
  DataArgs scan_d;
  int points = 1000, c_points = 101;
  bool surface = false;
  double c_min = -5.0, c_max = 5.0;
  auto* scan_cmd = app.add_subcommand("scan", "Likelihood scan for m = 2");
  add_structure_options(scan_cmd, scan_s);
  add_data_options(scan_cmd, scan_d);
  scan_cmd->add_option("--points", points, "Grid points in t over [0, pi)")->capture_default_str();
  scan_cmd->add_flag("--surface", surface, "Scan the (t, c) plane instead of profiling c");
  scan_cmd->add_option("--c-points", c_points, "Grid points in c")->capture_default_str();
  scan_cmd->add_option("--c-min", c_min, "Lower end of the c grid")->capture_default_str();
  scan_cmd->add_option("--c-max", c_max, "Upper end of the c grid")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    check_format(g);
    if (g.threads < 1) throw UsageError("--threads must be >= 1");
    if (*enumerate) return cmd_enumerate(g, h, p, k, m);
    if (*simulate_cmd) {
      return cmd_simulate(g, sim_s, sim_k, sim_m, sim_t, burn_in, exogenous, radius, y_out, x_out);
    }
    if (*fit_cmd) return cmd_fit(g, fit_s, fit_d, fit_f, fit_p, full_ols);
    if (*select_cmd) return cmd_select(g, sel_d, sel_f, sel_p, criterion, structures);
    if (*predict_cmd) {
      DataArgs d{pred_y, pred_x, false};
      return cmd_predict(g, model_path, d, steps);
    }
    if (*lq_cmd) return cmd_lq(g, lq_input, lq_s);
    if (*scan_cmd) return cmd_scan(g, scan_s, scan_d, points, surface, c_points, c_min, c_max);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const RankError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
  return kUsage;
}

}  // namespace minvarx::cli
