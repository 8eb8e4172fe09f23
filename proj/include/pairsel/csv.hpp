#pragma once

#include <string>
#include <variant>

#include "pairsel/data_matrix.hpp"

namespace pairsel {

/// Reads a rectangular numeric CSV into a DataMatrix, taking the response
/// from the named or 0-based indexed column. Ragged rows, non-numeric cells
/// and missing values raise std::runtime_error citing row and column; there
/// is no imputation. Without a header, columns are named x1..xp and the
/// response must be given by index.
DataMatrix ingest_csv(const std::string& path,
                      const std::variant<std::string, int>& response_column,
                      bool header = true);

/// Writes x columns (header from column_names) plus a final response column
/// "y", floats with 17 significant digits.
void emit_csv(const std::string& path, const DataMatrix& d);

/// One value per line under a "prediction" header.
void write_predictions_csv(const std::string& path, const Eigen::VectorXd& values);

}  // namespace pairsel
