// Python bindings for the main operations: unit conversions, the prediction
// chain, the stream Monte Carlo, power-law fitting and the pair-rate bound.
// Scalar in, dict out; the C++ structs stay an implementation detail.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etpa/detection.hpp"
#include "etpa/fit.hpp"
#include "etpa/mc.hpp"
#include "etpa/source.hpp"
#include "etpa/tpa.hpp"
#include "etpa/units.hpp"

namespace py = pybind11;
using namespace etpa;

namespace {

WidthRep rep_from_string(const std::string& name) {
  static const std::map<std::string, WidthRep> reps = {
      {"fwhm_wavelength", WidthRep::fwhm_wavelength},
      {"fwhm_frequency", WidthRep::fwhm_frequency},
      {"fwhm_angular", WidthRep::fwhm_angular},
      {"std_angular", WidthRep::std_angular},
  };
  auto it = reps.find(name);
  if (it == reps.end()) throw py::value_error("unknown width representation '" + name + "'");
  return it->second;
}

SampleCell cell_from_args(double length_m, double concentration_mmol_per_l,
                          double sigma2_gm, double fluorescence_yield) {
  return make_sample_cell(length_m, concentration_mmol_per_l, sigma2_gm,
                          fluorescence_yield);
}

}  // namespace

PYBIND11_MODULE(_etpa, m) {
  m.doc() = "ETPA feasibility toolkit core";

  m.def(
      "power_to_flux",
      [](double watts, double wavelength_m) {
        return power_to_flux(OpticalPower{watts}, Wavelength{wavelength_m}).per_second;
      },
      py::arg("watts"), py::arg("wavelength_m"));
  m.def(
      "flux_to_power",
      [](double per_second, double wavelength_m) {
        return flux_to_power(PhotonFlux{per_second}, Wavelength{wavelength_m}).watts;
      },
      py::arg("per_second"), py::arg("wavelength_m"));
  m.def(
      "convert_bandwidth",
      [](double value, const std::string& rep, const std::string& target,
         std::optional<double> center_wavelength_m) {
        SpectralWidth w{value, rep_from_string(rep), center_wavelength_m};
        return convert_bandwidth(w, rep_from_string(target)).value;
      },
      py::arg("value"), py::arg("rep"), py::arg("target"),
      py::arg("center_wavelength_m") = std::nullopt);
  m.def("gm_to_si", &gm_to_si, py::arg("sigma2_gm"));

  m.def(
      "pair_state",
      [](double pair_rate_per_watt, double pump_power_w, double bandwidth_fwhm_nm,
         double center_wavelength_nm, std::optional<double> saturation_power_w) {
        SpdcSource s;
        s.pair_rate_per_watt = pair_rate_per_watt;
        s.saturation_power = saturation_power_w;
        s.center_wavelength = center_wavelength_nm * 1e-9;
        s.bandwidth = SpectralWidth{bandwidth_fwhm_nm * 1e-9, WidthRep::fwhm_wavelength,
                                    s.center_wavelength};
        s.pump_linewidth_fwhm = 1.0;  // unused by the state itself
        EppState e = pair_rate(s, OpticalPower{pump_power_w});
        py::dict d;
        d["pair_flux"] = e.pair_flux;
        d["photon_flux"] = e.photon_flux;
        d["sigma_std_angular"] = e.sigma_epp.value;
        d["correlation_time"] = e.correlation_time;
        d["isolated"] = is_isolated_pairs(e);
        return d;
      },
      py::arg("pair_rate_per_watt"), py::arg("pump_power_w"),
      py::arg("bandwidth_fwhm_nm"), py::arg("center_wavelength_nm"),
      py::arg("saturation_power_w") = std::nullopt);
  m.def("mode_number", &mode_number, py::arg("epp_bandwidth_fwhm_hz"),
        py::arg("pump_linewidth_fwhm_hz"));
  m.def(
      "qef",
      [](double sigma_std_angular, double flux) {
        return qef(SpectralWidth{sigma_std_angular, WidthRep::std_angular, std::nullopt},
                   PhotonFlux{flux});
      },
      py::arg("sigma_std_angular"), py::arg("flux"));

  m.def(
      "focal_integral",
      [](double waist_radius_m, double wavelength_m, double cell_length_m,
         double waist_position_m, double cell_center_offset_m) {
        GaussianBeam beam{waist_radius_m, wavelength_m, waist_position_m};
        SampleCell cell;
        cell.length = cell_length_m;
        return focal_integral(beam, cell, cell_center_offset_m);
      },
      py::arg("waist_radius_m"), py::arg("wavelength_m"), py::arg("cell_length_m"),
      py::arg("waist_position_m") = 0.0, py::arg("cell_center_offset_m") = 0.0);
  m.def(
      "classical_tpa_rate",
      [](double flux, double cell_length_m, double concentration_mmol_per_l,
         double sigma2_gm, double fluorescence_yield, double eta_col, double eta_det,
         double focal) {
        return classical_tpa_rate(
            PhotonFlux{flux},
            cell_from_args(cell_length_m, concentration_mmol_per_l, sigma2_gm,
                           fluorescence_yield),
            CollectionSetup{eta_col, eta_det}, focal);
      },
      py::arg("flux"), py::arg("cell_length_m"), py::arg("concentration_mmol_per_l"),
      py::arg("sigma2_gm"), py::arg("fluorescence_yield"), py::arg("eta_col"),
      py::arg("eta_det"), py::arg("focal"));
  m.def(
      "etpa_rate",
      [](double qef_value, double flux, double cell_length_m,
         double concentration_mmol_per_l, double sigma2_gm, double fluorescence_yield,
         double eta_col, double eta_det, double focal) {
        return etpa_rate(qef_value, PhotonFlux{flux},
                         cell_from_args(cell_length_m, concentration_mmol_per_l,
                                        sigma2_gm, fluorescence_yield),
                         CollectionSetup{eta_col, eta_det}, focal);
      },
      py::arg("qef"), py::arg("flux"), py::arg("cell_length_m"),
      py::arg("concentration_mmol_per_l"), py::arg("sigma2_gm"),
      py::arg("fluorescence_yield"), py::arg("eta_col"), py::arg("eta_det"),
      py::arg("focal"));
  m.def(
      "enhancement_bound",
      [](double threshold, double predicted_rate, double threshold_err, double rate_err) {
        EnhancementBound b =
            enhancement_bound(threshold, predicted_rate, threshold_err, rate_err);
        py::dict d;
        d["bound"] = b.bound;
        d["uncertainty"] = b.uncertainty;
        return d;
      },
      py::arg("threshold"), py::arg("predicted_rate"), py::arg("threshold_err") = 0.0,
      py::arg("rate_err") = 0.0);

  m.def("threshold_3sigma", &threshold_3sigma, py::arg("dark_rate"), py::arg("duration"));
  m.def("dead_time_response", &dead_time_response, py::arg("true_rate"),
        py::arg("dead_time"));
  m.def("accidental_rate", &accidental_rate, py::arg("singles_a"), py::arg("singles_b"),
        py::arg("window"));

  m.def(
      "simulate_stream",
      [](double pair_rate, double duration, std::uint64_t seed,
         double pre_split_transmission, double arm_transmission_a,
         double arm_transmission_b, double splitter_ratio, double coincidence_window,
         double dead_time, double dark_rate_a, double dark_rate_b) {
        McConfig cfg;
        cfg.pair_rate = pair_rate;
        cfg.duration = duration;
        cfg.seed = seed;
        cfg.pre_split_transmission = pre_split_transmission;
        cfg.arm_transmission_a = arm_transmission_a;
        cfg.arm_transmission_b = arm_transmission_b;
        cfg.splitter_ratio = splitter_ratio;
        cfg.coincidence_window = coincidence_window;
        cfg.dead_time = dead_time;
        cfg.dark_rate_a = dark_rate_a;
        cfg.dark_rate_b = dark_rate_b;
        McResult r = simulate_stream(cfg);
        py::dict d;
        d["singles_a"] = r.singles_a;
        d["singles_b"] = r.singles_b;
        d["coincidences"] = r.coincidences;
        d["accidental_estimate"] = r.accidental_estimate;
        return d;
      },
      py::arg("pair_rate"), py::arg("duration"), py::arg("seed") = 0,
      py::arg("pre_split_transmission") = 1.0, py::arg("arm_transmission_a") = 1.0,
      py::arg("arm_transmission_b") = 1.0, py::arg("splitter_ratio") = 0.5,
      py::arg("coincidence_window") = 1e-9, py::arg("dead_time") = 0.0,
      py::arg("dark_rate_a") = 0.0, py::arg("dark_rate_b") = 0.0);

  m.def(
      "fit_power_law",
      [](const std::vector<double>& x, const std::vector<double>& y,
         std::optional<std::vector<double>> y_err, std::optional<double> fixed_exponent) {
        DataSeries s;
        s.x = x;
        s.y = y;
        if (y_err) s.y_err = *y_err;
        PowerLawFit f = fit_power_law(s, fixed_exponent);
        py::dict d;
        d["amplitude"] = f.amplitude;
        d["exponent"] = f.exponent;
        d["exponent_err"] = f.exponent_err;
        d["n_points_used"] = f.n_points_used;
        d["classification"] = to_string(classify_scaling(f));
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("y_err") = std::nullopt,
      py::arg("fixed_exponent") = std::nullopt);

  m.def(
      "bound_pair_rate",
      [](const std::vector<double>& pump_power, const std::vector<double>& singles_a,
         const std::vector<double>& singles_b, const std::vector<double>& coincidences,
         const std::vector<double>& duration, const std::vector<double>& attenuation,
         double efficiency, double dead_time, double dark_rate) {
        const std::size_t n = pump_power.size();
        if (singles_a.size() != n || singles_b.size() != n || coincidences.size() != n ||
            duration.size() != n || attenuation.size() != n)
          throw py::value_error("all record columns must have the same length");
        std::vector<PowerRecord> records(n);
        for (std::size_t i = 0; i < n; ++i) {
          records[i].pump_power = pump_power[i];
          records[i].record = CountRecord{singles_a[i], singles_b[i], coincidences[i],
                                          duration[i], attenuation[i]};
        }
        PairRateBound b =
            bound_pair_rate(records, DetectorModel{efficiency, dead_time, dark_rate});
        py::dict d;
        d["pairs_per_second"] = b.pairs_per_second;
        d["uncertainty"] = b.uncertainty;
        return d;
      },
      py::arg("pump_power"), py::arg("singles_a"), py::arg("singles_b"),
      py::arg("coincidences"), py::arg("duration"), py::arg("attenuation"),
      py::arg("efficiency"), py::arg("dead_time") = 0.0, py::arg("dark_rate") = 0.0);
}
