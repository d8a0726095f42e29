#include "etpa/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

double fwhm_to_std_ratio() { return 2.0 * std::sqrt(2.0 * std::log(2.0)); }  // 2.35482...

bool is_wavelength(WidthRep r) { return r == WidthRep::fwhm_wavelength; }

}  // namespace

PhotonFlux power_to_flux(OpticalPower p, Wavelength lambda) {
  if (!std::isfinite(p.watts) || p.watts < 0.0)
    throw domain_error("power_to_flux: power must be finite and >= 0, got " +
                       std::to_string(p.watts));
  if (!(lambda.meters > 0.0))
    throw domain_error("power_to_flux: wavelength must be > 0");
  return {p.watts * lambda.meters / PhysicalConstants::hc};
}

OpticalPower flux_to_power(PhotonFlux f, Wavelength lambda) {
  if (!std::isfinite(f.per_second) || f.per_second < 0.0)
    throw domain_error("flux_to_power: flux must be finite and >= 0");
  if (!(lambda.meters > 0.0))
    throw domain_error("flux_to_power: wavelength must be > 0");
  return {f.per_second * PhysicalConstants::hc / lambda.meters};
}

SpectralWidth convert_bandwidth(const SpectralWidth& w, WidthRep target) {
  if (!(w.value > 0.0) || !std::isfinite(w.value))
    throw domain_error("convert_bandwidth: width must be finite and > 0");
  if (w.rep == target) return w;

  const bool crosses_wavelength = is_wavelength(w.rep) != is_wavelength(target);
  if (crosses_wavelength && !w.center_wavelength)
    throw domain_error(
        "convert_bandwidth: center wavelength required for wavelength<->frequency conversion");

  const double two_pi = 2.0 * std::numbers::pi;

  // to hub: FWHM-angular [rad/s]
  double ang = 0.0;
  switch (w.rep) {
    case WidthRep::fwhm_wavelength: {
      const double l0 = *w.center_wavelength;
      if (!(l0 > 0.0)) throw domain_error("convert_bandwidth: center wavelength must be > 0");
      ang = two_pi * PhysicalConstants::c * w.value / (l0 * l0);  // first-order dispersion
      break;
    }
    case WidthRep::fwhm_frequency:
      ang = two_pi * w.value;
      break;
    case WidthRep::fwhm_angular:
      ang = w.value;
      break;
    case WidthRep::std_angular:
      ang = w.value * fwhm_to_std_ratio();
      break;
  }

  SpectralWidth out;
  out.rep = target;
  out.center_wavelength = w.center_wavelength;
  switch (target) {
    case WidthRep::fwhm_wavelength: {
      const double l0 = *w.center_wavelength;
      if (!(l0 > 0.0)) throw domain_error("convert_bandwidth: center wavelength must be > 0");
      out.value = ang * l0 * l0 / (two_pi * PhysicalConstants::c);
      break;
    }
    case WidthRep::fwhm_frequency:
      out.value = ang / two_pi;
      break;
    case WidthRep::fwhm_angular:
      out.value = ang;
      break;
    case WidthRep::std_angular:
      out.value = ang / fwhm_to_std_ratio();
      break;
  }
  return out;
}

double gm_to_si(double sigma2_gm) {
  if (!(sigma2_gm >= 0.0))
    throw domain_error("gm_to_si: cross section must be >= 0, got " + std::to_string(sigma2_gm));
  return sigma2_gm * 1e-50;  // cm^4 s
}

}  // namespace etpa
