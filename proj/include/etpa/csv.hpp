#pragma once

#include <optional>
#include <string>
#include <vector>

#include "etpa/detection.hpp"
#include "etpa/fit.hpp"

namespace etpa::cli {

/// One measurement row. Count columns are raw counts over duration_s, not
/// rates; attenuation is the transmission that was in place for the row.
struct MeasurementRow {
  std::string x_kind;
  double x_value = 0.0;
  std::optional<double> counts;
  std::optional<double> singles_a;
  std::optional<double> singles_b;
  std::optional<double> coincidences;
  double duration = 0.0;        // s
  double attenuation = 1.0;
  double dark_counts = 0.0;
};

struct MeasurementTable {
  std::vector<MeasurementRow> rows;
  bool has_counts = false;       // generic y column present
  bool has_triple = false;       // singles_a/singles_b/coincidences present
};

// First line must be "# schema=1", then a header naming a subset of the known
// columns (x_kind, x_value, duration_s required; counts and/or the full
// singles_a/singles_b/coincidences triple). All format problems are collected
// with line context into one validation_error.
MeasurementTable read_measurements(const std::string& path);
MeasurementTable parse_measurements_string(const std::string& text);

// Fit input: y = counts/duration as a rate, common duration across rows.
// Uses the generic counts column when present, else coincidences.
DataSeries series_from_table(const MeasurementTable& table, double dark_rate);

// Coincidence-scan input: rates + per-row attenuation, pump power from x_value.
std::vector<PowerRecord> records_from_table(const MeasurementTable& table);

}  // namespace etpa::cli
