#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "etpa/config.hpp"
#include "etpa/csv.hpp"
#include "etpa/mc.hpp"

namespace etpa::cli {

// Each run_* is a pure function of its options: identical inputs give
// byte-identical output strings. main() owns all I/O.

struct PredictOptions {
  ExperimentConfig cfg;
  std::optional<double> force_qef;  // override the computed enhancement factor
};
std::string run_predict(const PredictOptions& opts);

struct BoundOptions {
  ExperimentConfig cfg;
  std::optional<double> threshold_override;  // measured detection threshold, 1/s
};
std::string run_bound(const BoundOptions& opts);

struct FitOptions {
  MeasurementTable table;
  std::optional<double> fixed_exponent;
  double dark_rate = 0.0;  // counts/s, subtracted before fitting
};
struct FitOutput {
  std::string report;
  std::string plot_csv;  // data + fitted curve + slope-1/slope-2 references
};
FitOutput run_fit(const FitOptions& opts);

struct SimulateOptions {
  ExperimentConfig cfg;
  SweepKnob knob = SweepKnob::pump;
  double from = 0.0;  // W for pump, transmission for attenuation
  double to = 0.0;
  int points = 0;
  bool linear_spacing = false;  // default log spacing
  double duration = 1.0;        // s per point
  std::uint64_t seed = 0;
};
std::string run_simulate(const SimulateOptions& opts);  // returns schema=1 CSV

struct KlyshkoOptions {
  ExperimentConfig cfg;
  MeasurementTable table;
};
std::string run_klyshko(const KlyshkoOptions& opts);

}  // namespace etpa::cli
