#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "minvarx/blockops.hpp"
#include "minvarx/estimation.hpp"
#include "minvarx/simulation.hpp"
#include "minvarx/structure.hpp"

namespace minvarx::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Serializes with two-space indentation; every double is written with
/// "%.17g" so identical values always produce identical bytes.
std::string dump(const Json& j);

/// "%.17g" formatting; non-finite values become "inf", "-inf" or "nan".
std::string format_double(double v);

/// Writes to a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

/// {"rows": r, "cols": c, "data": [row-major values]}.
Json matrix_to_json(const Eigen::MatrixXd& m);
/// Accepts the object form above or a nested array of rows.
Eigen::MatrixXd matrix_from_json(const Json& j);

/// {"pairs": [[r, l], ...], "dvec": [d_1, ..., d_p]}.
Json structure_to_json(const StructureParams& psi);
/// Accepts an object with "pairs" or "dvec", a pair list, or a string.
StructureParams structure_from_json(const Json& j);
/// Parses "[(3,1),(1,1)]" (brackets optional) into the pair form.
StructureParams parse_structure(const std::string& text);
/// Parses "1,0,2" into the d-vector form.
StructureParams parse_dvec(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd data;  // rows = time
};

/// Header row required; throws DataError with the offending line number.
CsvTable read_csv(const std::string& path);
std::string format_csv(const std::vector<std::string>& header, const Eigen::MatrixXd& rows);

Json fit_result_to_json(const FitResult& r, bool autoregressive);
Json model_to_json(const GeneratedModel& model);
Json selection_to_json(const SelectionReport& report);

}  // namespace minvarx::io
