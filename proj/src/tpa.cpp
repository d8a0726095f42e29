#include "etpa/tpa.hpp"

#include <cmath>
#include <numbers>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

constexpr double pi = std::numbers::pi;

void check_beam(const GaussianBeam& beam) {
  if (!(beam.waist_radius > 0.0)) throw domain_error("GaussianBeam: waist radius must be > 0");
  if (!(beam.wavelength > 0.0)) throw domain_error("GaussianBeam: wavelength must be > 0");
}

void check_cell(const SampleCell& cell) {
  if (!(cell.length > 0.0)) throw domain_error("SampleCell: length must be > 0");
  if (!(cell.concentration >= 0.0))
    throw domain_error("SampleCell: concentration must be >= 0");
  if (!(cell.sigma2 >= 0.0)) throw domain_error("SampleCell: sigma2 must be >= 0");
  if (!(cell.fluorescence_yield >= 0.0) || !(cell.fluorescence_yield <= 1.0))
    throw domain_error("SampleCell: fluorescence yield must lie in [0,1]");
}

void check_collection(const CollectionSetup& col) {
  if (!(col.eta_col >= 0.0) || !(col.eta_col <= 1.0))
    throw domain_error("CollectionSetup: eta_col must lie in [0,1]");
  if (!(col.eta_det >= 0.0) || !(col.eta_det <= 1.0))
    throw domain_error("CollectionSetup: eta_det must lie in [0,1]");
}

}  // namespace

double rayleigh_range(const GaussianBeam& beam) {
  check_beam(beam);
  return pi * beam.waist_radius * beam.waist_radius / beam.wavelength;
}

SampleCell make_sample_cell(double length_m, double concentration_mmol_per_l,
                            double sigma2_gm, double fluorescence_yield) {
  SampleCell cell;
  cell.length = length_m;
  // mmol/L equals mol/m^3
  cell.concentration = concentration_mmol_per_l * PhysicalConstants::n_a;
  cell.sigma2 = gm_to_si(sigma2_gm) * 1e-8;  // cm^4 -> m^4
  cell.fluorescence_yield = fluorescence_yield;
  check_cell(cell);
  return cell;
}

double focal_integral(const GaussianBeam& beam, const SampleCell& cell,
                      double cell_center_offset) {
  check_beam(beam);
  if (!(cell.length > 0.0)) throw domain_error("focal_integral: cell length must be > 0");
  const double zr = rayleigh_range(beam);
  const double a = cell_center_offset - 0.5 * cell.length - beam.waist_position;
  const double b = cell_center_offset + 0.5 * cell.length - beam.waist_position;
  // z_R / w0^2 = pi / lambda
  return (pi / beam.wavelength) * (std::atan(b / zr) - std::atan(a / zr));
}

double classical_tpa_rate(PhotonFlux flux, const SampleCell& cell,
                          const CollectionSetup& col, double focal) {
  if (!(flux.per_second >= 0.0)) throw domain_error("classical_tpa_rate: flux must be >= 0");
  check_cell(cell);
  check_collection(col);
  if (!(focal >= 0.0)) throw domain_error("classical_tpa_rate: focal integral must be >= 0");
  const double f2 = flux.per_second * flux.per_second;
  return f2 * cell.concentration * cell.sigma2 / pi * col.eta_col * col.eta_det *
         cell.fluorescence_yield * focal;
}

double qef(const SpectralWidth& sigma_epp, PhotonFlux flux) {
  if (!(flux.per_second > 0.0))
    throw domain_error("qef: flux must be > 0 (enhancement diverges at zero flux)");
  const double sigma = convert_bandwidth(sigma_epp, WidthRep::std_angular).value;
  return 2.0 * sigma / (std::sqrt(pi) * flux.per_second);
}

double etpa_rate(double qef_value, PhotonFlux flux, const SampleCell& cell,
                 const CollectionSetup& col, double focal) {
  if (!(qef_value >= 0.0)) throw domain_error("etpa_rate: qef must be >= 0");
  return qef_value * classical_tpa_rate(flux, cell, col, focal);
}

EnhancementBound enhancement_bound(double threshold, double predicted_rate,
                                   double threshold_err, double rate_err) {
  if (!(predicted_rate > 0.0))
    throw domain_error("enhancement_bound: predicted rate must be > 0");
  if (!(threshold >= 0.0)) throw domain_error("enhancement_bound: threshold must be >= 0");
  if (threshold_err < 0.0 || rate_err < 0.0)
    throw domain_error("enhancement_bound: errors must be >= 0");
  EnhancementBound out;
  out.threshold_rate = threshold;
  out.predicted_etpa_rate = predicted_rate;
  out.bound = threshold / predicted_rate;
  const double rel_t = threshold > 0.0 ? threshold_err / threshold : 0.0;
  const double rel_r = rate_err / predicted_rate;
  out.uncertainty = out.bound * std::hypot(rel_t, rel_r);
  return out;
}

EtaColFit fit_collection_efficiency(const std::vector<FluxRatePoint>& data,
                                    const SampleCell& cell, const CollectionSetup& col,
                                    double focal) {
  check_cell(cell);
  check_collection(col);
  if (data.size() < 2)
    throw domain_error("fit_collection_efficiency: need >= 2 data points");
  bool distinct = false;
  for (const auto& p : data)
    if (p.flux != data.front().flux) distinct = true;
  if (!distinct)
    throw domain_error("fit_collection_efficiency: degenerate data, single flux value");

  bool weighted = false;
  for (const auto& p : data)
    if (p.rate_err > 0.0) weighted = true;

  // amplitude-only LSQ for rate = a * F^2
  double sxx = 0, sxy = 0;
  for (const auto& p : data) {
    if (!(p.rate > 0.0))
      throw domain_error("fit_collection_efficiency: rates must be > 0");
    double w = 1.0;
    if (weighted) {
      if (!(p.rate_err > 0.0))
        throw domain_error("fit_collection_efficiency: mixed zero/nonzero rate errors");
      w = 1.0 / (p.rate_err * p.rate_err);
    }
    const double x = p.flux * p.flux;
    sxx += w * x * x;
    sxy += w * x * p.rate;
  }
  if (!(sxx > 0.0)) throw domain_error("fit_collection_efficiency: zero design matrix");
  const double a = sxy / sxx;

  double var_a;
  if (weighted) {
    var_a = 1.0 / sxx;
  } else {
    double rss = 0;
    for (const auto& p : data) {
      const double r = p.rate - a * p.flux * p.flux;
      rss += r * r;
    }
    var_a = data.size() > 1 ? (rss / double(data.size() - 1)) / sxx : 0.0;
  }

  const double denom = cell.concentration * cell.sigma2 * col.eta_det *
                       cell.fluorescence_yield * focal;
  if (!(denom > 0.0))
    throw domain_error("fit_collection_efficiency: chain has a zero factor, "
                       "eta_col not identifiable");
  EtaColFit out;
  out.eta_col = a * pi / denom;
  out.err = std::sqrt(var_a) * pi / denom;
  return out;
}

}  // namespace etpa
