#pragma once

#include <vector>

#include "etpa/units.hpp"

namespace etpa {

struct GaussianBeam {
  double waist_radius = 0.0;    // m, w0 > 0
  double wavelength = 0.0;      // m, > 0
  double waist_position = 0.0;  // m along the optical axis
};

double rayleigh_range(const GaussianBeam& beam);  // pi * w0^2 / lambda

/// Sample parameters in SI. Use make_sample_cell to construct from the lab
/// units (mm cuvette, mM concentration, GM cross section).
struct SampleCell {
  double length = 0.0;              // m, > 0
  double concentration = 0.0;       // molecules/m^3
  double sigma2 = 0.0;              // m^4 s
  double fluorescence_yield = 0.0;  // [0,1]
};

SampleCell make_sample_cell(double length_m, double concentration_mmol_per_l,
                            double sigma2_gm, double fluorescence_yield);

struct CollectionSetup {
  double eta_col = 0.0;  // [0,1], geometric collection efficiency
  double eta_det = 0.0;  // [0,1], detector quantum efficiency
};

struct EnhancementBound {
  double threshold_rate = 0.0;       // 1/s
  double predicted_etpa_rate = 0.0;  // 1/s
  double bound = 0.0;                // threshold / rate
  double uncertainty = 0.0;
};

// Integral of dz / w(z)^2 over the cell, closed form
// (pi/lambda) * [atan((b - z0)/z_R) - atan((a - z0)/z_R)].
// Monotone in cell length, bounded above by pi^2/lambda.
// cell_center_offset places the cell center in the beam's axial frame.
double focal_integral(const GaussianBeam& beam, const SampleCell& cell,
                      double cell_center_offset);

// Detected fluorescence rate F^2 * C * sigma2 / pi * eta_col * eta_det *
// gamma * focal. Exactly quadratic in F.
double classical_tpa_rate(PhotonFlux flux, const SampleCell& cell,
                          const CollectionSetup& col, double focal);

// 2 * sigma / (sqrt(pi) * F), sigma taken in STD-angular representation.
// Equals 2 / (sqrt(pi) * F * tau_c) under tau_c = 1/sigma.
double qef(const SpectralWidth& sigma_epp, PhotonFlux flux);

double etpa_rate(double qef_value, PhotonFlux flux, const SampleCell& cell,
                 const CollectionSetup& col, double focal);

// bound = threshold / rate; first-order uncorrelated error propagation.
EnhancementBound enhancement_bound(double threshold, double predicted_rate,
                                   double threshold_err, double rate_err);

struct FluxRatePoint {
  double flux = 0.0;      // photons/s
  double rate = 0.0;      // detected counts/s, > 0
  double rate_err = 0.0;  // 0 = unknown; weighted fit needs all > 0
};

struct EtaColFit {
  double eta_col = 0.0;
  double err = 0.0;
};

// Fixed-exponent-2 amplitude fit a = rate/F^2, then
// eta_col = a * pi / (C * sigma2 * eta_det * gamma * focal).
EtaColFit fit_collection_efficiency(const std::vector<FluxRatePoint>& data,
                                    const SampleCell& cell, const CollectionSetup& col,
                                    double focal);

}  // namespace etpa
