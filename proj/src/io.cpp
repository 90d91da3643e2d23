#include "minvarx/io.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "minvarx/errors.hpp"

namespace minvarx::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void write_value(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        write_value(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      break;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && is_scalar(e);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_value(j[i], out, indent + 1);
        }
        out += "]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write_value(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  write_value(j, out, 0);
  out += "\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot open '" + tmp.string() + "' for writing");
    os << contents;
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DataError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot move output into place at '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  try {
    if (j.is_object()) {
      const auto rows = j.at("rows").get<Eigen::Index>();
      const auto cols = j.at("cols").get<Eigen::Index>();
      const auto& data = j.at("data");
      if (rows < 0 || cols < 0 || !data.is_array() ||
          data.size() != static_cast<std::size_t>(rows * cols)) {
        throw DataError("matrix: data length does not match rows x cols");
      }
      Eigen::MatrixXd m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[i * cols + c].get<double>();
      }
      return m;
    }
    if (j.is_array()) {
      const auto rows = static_cast<Eigen::Index>(j.size());
      const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
      Eigen::MatrixXd m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
          throw DataError("matrix: ragged nested array");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
      }
      return m;
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("matrix: ") + e.what());
  }
  throw DataError("matrix: expected an object or a nested array");
}

Json structure_to_json(const StructureParams& psi) {
  Json pairs = Json::array();
  for (const auto& b : psi.pairs()) pairs.push_back(Json::array({b.exponent, b.sub_rank}));
  return Json{{"pairs", std::move(pairs)}, {"dvec", psi.dvec()}};
}

StructureParams structure_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_structure(j.get<std::string>());
    if (j.is_object()) {
      if (j.contains("pairs")) return structure_from_json(j.at("pairs"));
      if (j.contains("dvec")) return StructureParams::from_dvec(j.at("dvec").get<std::vector<int>>());
    }
    if (j.is_array()) {
      std::vector<JordanBlock> pairs;
      for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw DataError("structure: expected [r, l] pairs");
        pairs.push_back({e[0].get<int>(), e[1].get<int>()});
      }
      return StructureParams::from_pairs(pairs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("structure: ") + e.what());
  }
  throw DataError("structure: expected \"pairs\" or \"dvec\"");
}

StructureParams parse_structure(const std::string& text) {
  static const std::regex pair_re(R"(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");
  static const std::regex full_re(
      R"(\s*\[?\s*\(\s*-?\d+\s*,\s*-?\d+\s*\)(\s*,\s*\(\s*-?\d+\s*,\s*-?\d+\s*\))*\s*\]?\s*)");
  if (!std::regex_match(text, full_re)) {
    throw StructureError("cannot parse structure '" + text + "' (expected e.g. [(3,1),(1,1)])");
  }
  std::vector<JordanBlock> pairs;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pair_re); it != std::sregex_iterator();
       ++it) {
    pairs.push_back({std::stoi((*it)[1]), std::stoi((*it)[2])});
  }
  return StructureParams::from_pairs(pairs);
}

StructureParams parse_dvec(const std::string& text) {
  std::vector<int> d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      d.push_back(std::stoi(item, &pos));
      if (item.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw StructureError("cannot parse d-vector '" + text + "'");
    }
  }
  return StructureParams::from_dvec(d);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    const auto start = s.find_first_not_of(" \t");
    return start == std::string::npos ? std::string() : s.substr(start);
  };

  CsvTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!strip(line).empty()) break;
  }
  if (strip(line).empty()) throw DataError(path + ": empty file (a header row is required)");
  for (auto& c : split(strip(line))) table.header.push_back(strip(c));
  for (const auto& name : table.header) {
    char* end = nullptr;
    std::strtod(name.c_str(), &end);
    if (!name.empty() && end && *end == '\0') {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": the first row must be a header of series names");
    }
  }

  std::vector<std::vector<double>> rows;
  const std::size_t ncol = table.header.size();
  while (std::getline(is, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty()) continue;
    const auto cells = split(s);
    if (cells.size() != ncol) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(ncol) +
                      " fields, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(ncol);
    for (const auto& raw : cells) {
      const std::string cell = strip(raw);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0' || !std::isfinite(v)) {
        throw DataError(path + ":" + std::to_string(line_no) + ": invalid number '" + cell + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  table.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncol));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < ncol; ++j) table.data(i, j) = rows[i][j];
  }
  return table;
}

std::string format_csv(const std::vector<std::string>& header, const Eigen::MatrixXd& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (j) out += ',';
      out += format_double(rows(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

Json matrix_list(const std::vector<Eigen::MatrixXd>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

Json rank_json(const RankReport& r) {
  return Json{{"rank", r.rank}, {"expected", r.expected}, {"pass", r.pass}};
}

}  // namespace

Json fit_result_to_json(const FitResult& r, bool autoregressive) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "fit";
  j["structure"] = structure_to_json(r.structure);
  j["mcmillan_degree"] = r.structure.mcmillan_degree();
  j["autoregressive"] = autoregressive;
  j["neg_log_lik"] = r.neg_log_lik;
  j["grad_norm"] = r.grad_norm;
  j["converged"] = r.converged;
  j["diverged"] = r.diverged;
  j["iterations"] = r.iterations;
  j["restarts_used"] = r.restarts_used;
  j["best_restart"] = r.best_restart;
  j["minimality"] = Json{{"G0", rank_json(r.minimality_g)}, {"H0", rank_json(r.minimality_h)}};
  j["G"] = matrix_to_json(r.g.data());
  j["H"] = matrix_to_json(r.h);
  j["F"] = matrix_to_json(r.f);
  j["phi"] = matrix_list(r.phi);
  j["omega"] = matrix_to_json(r.omega);
  return j;
}

Json model_to_json(const GeneratedModel& model) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "model";
  j["structure"] = structure_to_json(model.structure);
  j["seed"] = model.seed;
  j["H"] = matrix_to_json(model.h);
  j["F"] = matrix_to_json(model.f);
  j["G"] = matrix_to_json(model.g.data());
  j["phi"] = matrix_list(model.phi);
  j["omega"] = matrix_to_json(model.omega);
  return j;
}

Json selection_to_json(const SelectionReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "selection";
  j["criterion"] = to_string(report.criterion);
  j["ols_neg_log_lik"] = report.ols_neg_log_lik;
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["structure"] = structure_to_json(r.structure);
    row["mcmillan_degree"] = r.mcmillan_degree;
    row["param_reduction"] = r.param_reduction;
    row["neg_log_lik"] = r.neg_log_lik;
    row["criterion"] = r.criterion;
    row["converged"] = r.converged;
    row["diverged"] = r.diverged;
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace minvarx::io
