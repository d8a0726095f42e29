#pragma once

#include <optional>

namespace etpa {

/// CODATA 2018 defining constants (exact by definition since the SI revision).
struct PhysicalConstants {
  static constexpr double h = 6.62607015e-34;     // Planck constant, J s
  static constexpr double c = 299792458.0;        // vacuum light speed, m/s
  static constexpr double n_a = 6.02214076e23;    // Avogadro constant, 1/mol
  static constexpr double hc = h * c;             // J m
};

struct OpticalPower {
  double watts = 0.0;  // >= 0, finite
};

struct PhotonFlux {
  double per_second = 0.0;  // >= 0
};

struct Wavelength {
  double meters = 0.0;  // > 0
};

enum class WidthRep {
  fwhm_wavelength,  // m
  fwhm_frequency,   // Hz
  fwhm_angular,     // rad/s
  std_angular,      // rad/s
};

/// Spectral width of a Gaussian line in one of four interchangeable
/// representations. center_wavelength is required whenever a conversion
/// crosses the wavelength/frequency boundary.
struct SpectralWidth {
  double value = 0.0;  // unit fixed by rep
  WidthRep rep = WidthRep::fwhm_wavelength;
  std::optional<double> center_wavelength;  // m
};

// F = P*lambda/hc. Rejects negative or non-finite power.
PhotonFlux power_to_flux(OpticalPower p, Wavelength lambda);
OpticalPower flux_to_power(PhotonFlux f, Wavelength lambda);

// All paths between representations route through FWHM-angular, so chained
// conversions commute to roundoff. FWHM/STD ratio is the Gaussian
// 2*sqrt(2 ln 2).
SpectralWidth convert_bandwidth(const SpectralWidth& w, WidthRep target);

// 1 GM = 1e-50 cm^4 s. Output stays in cm^4 s; callers needing SI multiply
// by 1e-8 (cm^4 -> m^4).
double gm_to_si(double sigma2_gm);

}  // namespace etpa
