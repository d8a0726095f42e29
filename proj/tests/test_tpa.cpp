#include "etpa/tpa.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "etpa/errors.hpp"
#include "support/quadrature.hpp"
#include "support/random.hpp"

using namespace etpa;
using doctest::Approx;

namespace {

SampleCell reference_cell() { return make_sample_cell(0.01, 2.0, 9.4, 0.8); }

double in_range(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * testsupport::uniform01(g);
}

}  // namespace

TEST_CASE("rayleigh range scaling") {
  GaussianBeam beam{10e-6, 1064e-9, 0.0};
  const double zr = rayleigh_range(beam);
  CHECK(zr == Approx(std::numbers::pi * 1e-10 / 1064e-9).epsilon(1e-14));
  beam.waist_radius *= 4.0;
  CHECK(rayleigh_range(beam) == Approx(16.0 * zr).epsilon(1e-12));
  beam.waist_radius = 0.0;
  CHECK_THROWS_AS(rayleigh_range(beam), domain_error);
}

TEST_CASE("sample cell unit conversions") {
  const SampleCell cell = reference_cell();
  CHECK(cell.length == 0.01);
  // 2 mmol/L = 2 mol/m^3
  CHECK(cell.concentration == Approx(2.0 * 6.02214076e23).epsilon(1e-14));
  // 9.4 GM = 9.4e-50 cm^4 s = 9.4e-58 m^4 s
  CHECK(cell.sigma2 == Approx(9.4e-58).epsilon(1e-14));
  CHECK(cell.fluorescence_yield == 0.8);
  CHECK_THROWS_AS(make_sample_cell(0.0, 2.0, 9.4, 0.8), domain_error);
  CHECK_THROWS_AS(make_sample_cell(0.01, 2.0, 9.4, 1.5), domain_error);
  CHECK_THROWS_AS(make_sample_cell(0.01, -1.0, 9.4, 0.8), domain_error);
}

TEST_CASE("closed-form focal integral agrees with quadrature") {
  std::mt19937_64 gen(314159);
  for (int trial = 0; trial < 1000; ++trial) {
    GaussianBeam beam;
    beam.waist_radius = in_range(gen, 2e-6, 200e-6);
    beam.wavelength = in_range(gen, 400e-9, 1600e-9);
    beam.waist_position = in_range(gen, -10e-3, 10e-3);
    SampleCell cell;
    cell.length = in_range(gen, 1e-3, 50e-3);
    const double offset = in_range(gen, -cell.length, cell.length);

    const double closed = focal_integral(beam, cell, offset);
    const double zr = rayleigh_range(beam);
    const double w0sq = beam.waist_radius * beam.waist_radius;
    auto inv_w2 = [&](double z) {
      const double u = (z - beam.waist_position) / zr;
      return 1.0 / (w0sq * (1.0 + u * u));
    };
    const double numeric = testsupport::integrate(inv_w2, offset - 0.5 * cell.length,
                                                  offset + 0.5 * cell.length, 1e-12);
    CHECK(closed == Approx(numeric).epsilon(1e-9));
  }
}

TEST_CASE("focal integral saturates at pi^2 / lambda") {
  GaussianBeam beam{5e-6, 1064e-9, 0.0};
  SampleCell cell;
  cell.length = 1e6;  // effectively infinite against a ~74 um Rayleigh range
  const double inf_value = focal_integral(beam, cell, 0.0);
  CHECK(inf_value == Approx(std::numbers::pi * std::numbers::pi / 1064e-9).epsilon(1e-9));
  CHECK(inf_value == Approx(9275943.985986238).epsilon(1e-9));

  // monotone in cell length and bounded by the infinite-cell value
  double prev = 0.0;
  for (double len : {1e-3, 5e-3, 20e-3, 1.0}) {
    cell.length = len;
    const double v = focal_integral(beam, cell, 0.0);
    CHECK(v > prev);
    CHECK(v < inf_value);
    prev = v;
  }
}

TEST_CASE("focal integral symmetries") {
  const GaussianBeam beam{30e-6, 800e-9, 0.0};
  SampleCell cell;
  cell.length = 10e-3;
  CHECK(focal_integral(beam, cell, 4e-3) ==
        Approx(focal_integral(beam, cell, -4e-3)).epsilon(1e-12));
  // shifting waist and cell together changes nothing
  GaussianBeam shifted = beam;
  shifted.waist_position = 2.5e-3;
  CHECK(focal_integral(shifted, cell, 4e-3 + 2.5e-3) ==
        Approx(focal_integral(beam, cell, 4e-3)).epsilon(1e-12));
}

TEST_CASE("classical TPA rate value and scaling") {
  const SampleCell cell = reference_cell();
  const CollectionSetup col{0.019, 0.10};
  const PhotonFlux flux{4.0e9};
  const double rate = classical_tpa_rate(flux, cell, col, 9.277e6);
  CHECK(rate == Approx(8.130738735883969e-11).epsilon(1e-12));
  // strictly quadratic in flux
  const double rate3 = classical_tpa_rate(PhotonFlux{3.0 * flux.per_second}, cell, col, 9.277e6);
  CHECK(rate3 == Approx(9.0 * rate).epsilon(1e-12));
  CHECK(classical_tpa_rate(PhotonFlux{0.0}, cell, col, 9.277e6) == 0.0);
  CHECK_THROWS_AS(classical_tpa_rate(PhotonFlux{-1.0}, cell, col, 9.277e6), domain_error);
  CHECK_THROWS_AS(classical_tpa_rate(flux, cell, col, -1.0), domain_error);
  CHECK_THROWS_AS(classical_tpa_rate(flux, cell, CollectionSetup{1.5, 0.1}, 9.277e6),
                  domain_error);
}

TEST_CASE("quantum enhancement factor") {
  const SpectralWidth fwhm{40e-9, WidthRep::fwhm_wavelength, 1064e-9};
  const double q = qef(fwhm, PhotonFlux{2.0e9});
  CHECK(q == Approx(15945.738818284091).epsilon(1e-12));
  // inverse in flux, linear in width
  CHECK(qef(fwhm, PhotonFlux{4.0e9}) == Approx(0.5 * q).epsilon(1e-12));
  const SpectralWidth sigma = convert_bandwidth(fwhm, WidthRep::std_angular);
  const SpectralWidth doubled{2.0 * sigma.value, WidthRep::std_angular, std::nullopt};
  CHECK(qef(doubled, PhotonFlux{2.0e9}) == Approx(2.0 * q).epsilon(1e-12));
  // same thing expressed through the correlation time 1/sigma
  CHECK(q == Approx(2.0 / (std::sqrt(std::numbers::pi) * 2.0e9 * (1.0 / sigma.value)))
                 .epsilon(1e-12));
  CHECK_THROWS_AS(qef(fwhm, PhotonFlux{0.0}), domain_error);
}

TEST_CASE("etpa rate is qef times the classical rate") {
  const SampleCell cell = reference_cell();
  const CollectionSetup col{0.019, 0.10};
  const PhotonFlux flux{4.0e9};
  const double classical = classical_tpa_rate(flux, cell, col, 1.5741843e7);
  CHECK(etpa_rate(16000.0, flux, cell, col, 1.5741843e7) ==
        Approx(16000.0 * classical).epsilon(1e-14));
  CHECK_THROWS_AS(etpa_rate(-1.0, flux, cell, col, 1.0), domain_error);
}

TEST_CASE("enhancement bound and its uncertainty") {
  const EnhancementBound b = enhancement_bound(0.7, 2.2e-6, 0.1, 0.3e-6);
  CHECK(b.bound == Approx(318181.8181818181).epsilon(1e-12));
  CHECK(b.uncertainty == Approx(62838.45589151052).epsilon(1e-12));
  CHECK(b.threshold_rate == 0.7);
  CHECK(b.predicted_etpa_rate == 2.2e-6);

  const EnhancementBound z = enhancement_bound(0.0, 1.0e-6, 0.0, 0.0);
  CHECK(z.bound == 0.0);
  CHECK(z.uncertainty == 0.0);

  CHECK_THROWS_AS(enhancement_bound(0.7, 0.0, 0.1, 0.0), domain_error);
  CHECK_THROWS_AS(enhancement_bound(-0.1, 1e-6, 0.0, 0.0), domain_error);
  CHECK_THROWS_AS(enhancement_bound(0.7, 1e-6, -0.1, 0.0), domain_error);
}

TEST_CASE("collection efficiency fit inverts the forward model") {
  const SampleCell cell = reference_cell();
  const double true_eta = 0.019;
  const CollectionSetup col{true_eta, 0.10};
  const double focal = 1.5741843e7;

  std::vector<FluxRatePoint> data;
  for (double f : {1.0e9, 2.0e9, 4.0e9})
    data.push_back({f, classical_tpa_rate(PhotonFlux{f}, cell, col, focal), 0.0});

  const EtaColFit unweighted = fit_collection_efficiency(data, cell, col, focal);
  CHECK(unweighted.eta_col == Approx(true_eta).epsilon(1e-10));
  CHECK(unweighted.err <= 1e-10 * true_eta);  // exact data, residuals vanish

  std::vector<FluxRatePoint> weighted = data;
  for (auto& p : weighted) p.rate_err = 0.05 * p.rate;
  const EtaColFit w = fit_collection_efficiency(weighted, cell, col, focal);
  CHECK(w.eta_col == Approx(true_eta).epsilon(1e-10));
  CHECK(w.err > 0.0);

  std::vector<FluxRatePoint> mixed = weighted;
  mixed[1].rate_err = 0.0;
  CHECK_THROWS_AS(fit_collection_efficiency(mixed, cell, col, focal), domain_error);

  std::vector<FluxRatePoint> single{{1.0e9, 1.0, 0.0}, {1.0e9, 1.1, 0.0}};
  CHECK_THROWS_AS(fit_collection_efficiency(single, cell, col, focal), domain_error);
  CHECK_THROWS_AS(fit_collection_efficiency({data[0]}, cell, col, focal), domain_error);
}
