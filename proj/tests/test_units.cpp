#include "etpa/units.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "etpa/errors.hpp"

using namespace etpa;
using doctest::Approx;

namespace {
constexpr double kLambda = 1064e-9;
const SpectralWidth kFortyNm{40e-9, WidthRep::fwhm_wavelength, kLambda};
}  // namespace

TEST_CASE("power to flux matches P*lambda/hc") {
  // oracle: 1e-6 * 1064e-9 / (6.62607015e-34 * 299792458), evaluated separately
  CHECK(power_to_flux(OpticalPower{1e-6}, Wavelength{1064e-9}).per_second ==
        Approx(5356300027865.443).epsilon(1e-12));
  CHECK(power_to_flux(OpticalPower{1e-6}, Wavelength{532e-9}).per_second ==
        Approx(2678150013932.7217).epsilon(1e-12));
  // doubling the wavelength doubles the flux at fixed power
  const double f1 = power_to_flux(OpticalPower{1e-3}, Wavelength{532e-9}).per_second;
  const double f2 = power_to_flux(OpticalPower{1e-3}, Wavelength{1064e-9}).per_second;
  CHECK(f2 == Approx(2.0 * f1).epsilon(1e-14));
  CHECK(power_to_flux(OpticalPower{0.0}, Wavelength{1064e-9}).per_second == 0.0);
}

TEST_CASE("flux to power is the exact inverse") {
  CHECK(flux_to_power(PhotonFlux{1.0}, Wavelength{1064e-9}).watts ==
        Approx(1.8669603920572636e-19).epsilon(1e-12));
  for (double p : {1e-9, 1e-6, 0.5, 3.0}) {
    const PhotonFlux f = power_to_flux(OpticalPower{p}, Wavelength{kLambda});
    CHECK(flux_to_power(f, Wavelength{kLambda}).watts == Approx(p).epsilon(1e-13));
  }
}

TEST_CASE("power and wavelength validation") {
  CHECK_THROWS_AS(power_to_flux(OpticalPower{-1e-6}, Wavelength{1064e-9}), domain_error);
  CHECK_THROWS_AS(power_to_flux(OpticalPower{1e-6}, Wavelength{0.0}), domain_error);
  CHECK_THROWS_AS(flux_to_power(PhotonFlux{-1.0}, Wavelength{1064e-9}), domain_error);
}

TEST_CASE("bandwidth conversion fixed points for 40 nm at 1064 nm") {
  // oracles from c*dlam/lam^2, 2*pi*dnu, and the Gaussian FWHM/STD ratio
  CHECK(convert_bandwidth(kFortyNm, WidthRep::fwhm_frequency).value ==
        Approx(10592474772457.457).epsilon(1e-12));
  CHECK(convert_bandwidth(kFortyNm, WidthRep::fwhm_angular).value ==
        Approx(66554481856975.125).epsilon(1e-12));
  CHECK(convert_bandwidth(kFortyNm, WidthRep::std_angular).value ==
        Approx(28263086174001.207).epsilon(1e-12));
}

TEST_CASE("FWHM to STD uses the Gaussian ratio") {
  const SpectralWidth one{1.0, WidthRep::fwhm_angular, {}};
  CHECK(convert_bandwidth(one, WidthRep::std_angular).value ==
        Approx(1.0 / 2.3548200450309493).epsilon(1e-15));
}

TEST_CASE("conversions are involutions and commute through the hub") {
  std::mt19937_64 gen(101);
  const WidthRep reps[] = {WidthRep::fwhm_wavelength, WidthRep::fwhm_frequency,
                           WidthRep::fwhm_angular, WidthRep::std_angular};
  for (int i = 0; i < 200; ++i) {
    const double lam = 400e-9 + (gen() % 1000) * 1.2e-9;
    const double val = 1e-9 * (1.0 + double(gen() % 75));
    const SpectralWidth w{val, WidthRep::fwhm_wavelength, lam};
    for (WidthRep target : reps) {
      const SpectralWidth there = convert_bandwidth(w, target);
      const SpectralWidth back = convert_bandwidth(there, WidthRep::fwhm_wavelength);
      CHECK(back.value == Approx(val).epsilon(1e-12));
      // any two-hop path agrees with the direct conversion
      const SpectralWidth via =
          convert_bandwidth(convert_bandwidth(w, WidthRep::std_angular), target);
      CHECK(via.value == Approx(there.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("wavelength/frequency crossing requires the center wavelength") {
  const SpectralWidth no_center{40e-9, WidthRep::fwhm_wavelength, {}};
  CHECK_THROWS_AS(convert_bandwidth(no_center, WidthRep::fwhm_frequency), domain_error);
  // staying on the frequency side needs no center
  const SpectralWidth ang{1e13, WidthRep::fwhm_angular, {}};
  CHECK_NOTHROW(convert_bandwidth(ang, WidthRep::std_angular));
  CHECK_THROWS_AS(convert_bandwidth(ang, WidthRep::fwhm_wavelength), domain_error);
}

TEST_CASE("non-positive widths are rejected") {
  CHECK_THROWS_AS(
      convert_bandwidth(SpectralWidth{0.0, WidthRep::fwhm_angular, {}}, WidthRep::std_angular),
      domain_error);
  CHECK_THROWS_AS(
      convert_bandwidth(SpectralWidth{-1.0, WidthRep::fwhm_angular, {}}, WidthRep::std_angular),
      domain_error);
}

TEST_CASE("GM conversion") {
  CHECK(gm_to_si(1.0) == Approx(1e-50).epsilon(1e-15));
  CHECK(gm_to_si(9.4) == Approx(9.4e-50).epsilon(1e-15));
  CHECK(gm_to_si(0.0) == 0.0);
  CHECK_THROWS_AS(gm_to_si(-1.0), domain_error);
}
