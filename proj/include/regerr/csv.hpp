#pragma once

#include "regerr/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace regerr {

/// Comma-separated decimal numbers, one row per item and one column per
/// regressor. The first row is a header when any of its cells is not a number.
/// Every row must have the same number of cells; empty cells are errors.
PredictionMatrix read_prediction_csv(std::istream& in);
PredictionMatrix read_prediction_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form of `value`.
std::string format_number(double value);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& rows);
void write_prediction_csv(std::ostream& out, const PredictionMatrix& m);

/// Two-column plot data: component index, value.
void write_component_csv(std::ostream& out, const Vector& values, const std::string& value_name);

}  // namespace regerr
