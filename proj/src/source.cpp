#include "etpa/source.hpp"

#include <cmath>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

// Fills in the source's center wavelength so width conversions that cross the
// wavelength/frequency boundary work without per-call plumbing.
SpectralWidth with_center(const SpectralWidth& w, double center_m) {
  SpectralWidth out = w;
  if (!out.center_wavelength && center_m > 0.0) out.center_wavelength = center_m;
  return out;
}

}  // namespace

EppState pair_rate(const SpdcSource& source, OpticalPower pump_power) {
  if (!std::isfinite(pump_power.watts) || pump_power.watts < 0.0)
    throw domain_error("pair_rate: pump power must be finite and >= 0");

  double flux = 0.0;
  if (source.saturation_power) {
    const double psat = *source.saturation_power;
    if (!(psat > 0.0)) throw domain_error("pair_rate: saturation power must be > 0");
    flux = source.pair_rate_per_watt * psat * (1.0 - std::exp(-pump_power.watts / psat));
  } else {
    flux = source.pair_rate_per_watt * pump_power.watts;
  }

  EppState state;
  state.pair_flux = flux;
  state.photon_flux = 2.0 * flux;
  state.sigma_epp = convert_bandwidth(with_center(source.bandwidth, source.center_wavelength),
                                      WidthRep::std_angular);
  state.correlation_time = 1.0 / state.sigma_epp.value;
  return state;
}

double correlation_time(const EppState& state) {
  const double sigma = convert_bandwidth(state.sigma_epp, WidthRep::std_angular).value;
  return 1.0 / sigma;  // convert_bandwidth already rejects sigma <= 0
}

double mode_number(double epp_bandwidth_fwhm_hz, double pump_linewidth_fwhm_hz) {
  if (!(epp_bandwidth_fwhm_hz > 0.0))
    throw domain_error("mode_number: EPP bandwidth must be > 0");
  if (!(pump_linewidth_fwhm_hz > 0.0))
    throw domain_error("mode_number: pump linewidth must be > 0");
  return std::sqrt(2.0) * epp_bandwidth_fwhm_hz / pump_linewidth_fwhm_hz;
}

double mean_pair_separation(const EppState& state) {
  if (!(state.pair_flux > 0.0))
    throw domain_error("mean_pair_separation: pair flux must be > 0");
  return 1.0 / state.pair_flux;
}

bool is_isolated_pairs(const EppState& state, double ratio_threshold) {
  if (state.pair_flux == 0.0) return true;  // no pairs to overlap
  return mean_pair_separation(state) / correlation_time(state) >= ratio_threshold;
}

}  // namespace etpa
