#pragma once

#include <optional>
#include <string>

#include "etpa/detection.hpp"
#include "etpa/source.hpp"
#include "etpa/tpa.hpp"
#include "etpa/units.hpp"

namespace etpa::cli {

/// A value with an optional one-sigma uncertainty ("2.0e9 +- 0.2e9").
struct Uncertain {
  double value = 0.0;
  double err = 0.0;

  bool operator==(const Uncertain&) const = default;
};

/// Everything a run needs, straight from the key = value config file.
/// Quantities are stored in the file's units; the make_* accessors hand out
/// SI domain objects.
struct ExperimentConfig {
  // [source]
  Uncertain pair_rate_per_watt;                 // pairs/s/W
  std::optional<double> saturation_power_w;
  double pump_power_w = 0.0;
  double bandwidth_fwhm_nm = 0.0;
  double center_wavelength_nm = 0.0;
  double pump_linewidth_fwhm_hz = 0.0;
  // [beam] either an explicit focal integral or a waist geometry
  std::optional<double> focal_integral_per_m;
  std::optional<double> waist_radius_um;
  double waist_position_mm = 0.0;
  // [cell]
  double cell_length_mm = 0.0;
  double cell_center_offset_mm = 0.0;
  double concentration_mmol_per_l = 0.0;
  Uncertain sigma2_gm;
  double fluorescence_yield = 0.0;
  // [collection]
  Uncertain eta_col;
  double eta_det = 0.0;
  // [detector_a] / [detector_b]
  DetectorModel detector_a;
  DetectorModel detector_b;
  // [splitter]
  double splitter_ratio = 0.5;
  double pre_split_transmission = 1.0;
  // [coincidence]
  double coincidence_window_ns = 0.0;
  // [threshold]
  double threshold_dark_rate_hz = 0.0;
  double threshold_duration_s = 0.0;
  std::optional<Uncertain> measured_threshold_hz;

  bool operator==(const ExperimentConfig&) const = default;

  SpdcSource make_source() const;
  SampleCell make_cell() const;
  CollectionSetup make_collection() const;
  std::optional<GaussianBeam> make_beam() const;
  // focal override when present, else the closed form from the waist geometry
  double focal() const;  // 1/m
};

// Parses and fully validates; every problem is collected (line/key context)
// and thrown together as one validation_error. Unknown and duplicate keys are
// errors.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_string(const std::string& text);

// Canonical resolved dump; load_config(dump_config(c)) == c and the dump of
// the reload is byte-identical.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace etpa::cli
