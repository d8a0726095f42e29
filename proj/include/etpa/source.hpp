#pragma once

#include <optional>

#include "etpa/units.hpp"

namespace etpa {

/// CW-pumped type-0 SPDC source. Saturation, when set, models the
/// photorefractive clamp as an exponential approach; the small-signal limit
/// stays linear with slope pair_rate_per_watt.
struct SpdcSource {
  double pair_rate_per_watt = 0.0;         // pairs/s/W, >= 0
  std::optional<double> saturation_power;  // W, > 0 when present
  SpectralWidth bandwidth;
  double center_wavelength = 0.0;          // m, degenerate pair wavelength
  double pump_linewidth_fwhm = 0.0;        // Hz, > 0
};

/// Photon-pair beam at one operating point.
/// Invariants: photon_flux == 2*pair_flux; correlation_time == 1/sigma(STD-angular).
struct EppState {
  double pair_flux = 0.0;    // pairs/s
  double photon_flux = 0.0;  // photons/s
  SpectralWidth sigma_epp;
  double correlation_time = 0.0;  // s
};

EppState pair_rate(const SpdcSource& source, OpticalPower pump_power);

// 1/sigma with sigma in STD-angular representation.
double correlation_time(const EppState& state);

// K = sqrt(2) * dnu_epp / dnu_pump, both FWHM in Hz.
double mode_number(double epp_bandwidth_fwhm_hz, double pump_linewidth_fwhm_hz);

double mean_pair_separation(const EppState& state);  // s

// True iff mean separation / correlation time >= ratio_threshold (inclusive).
bool is_isolated_pairs(const EppState& state, double ratio_threshold = 100.0);

}  // namespace etpa
