#include "etpa/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "etpa/detection.hpp"
#include "etpa/errors.hpp"
#include "etpa/fit.hpp"
#include "etpa/report.hpp"
#include "etpa/source.hpp"
#include "etpa/tpa.hpp"

namespace etpa::cli {

namespace {

double rel(const Uncertain& u) { return u.value != 0 ? u.err / u.value : 0.0; }

double quad3(double a, double b, double c) { return std::sqrt(a * a + b * b + c * c); }

/// The predict pipeline shared by predict and bound. Relative uncertainties
/// are propagated through the net monomial of each quantity, so the pair-rate
/// error is not double counted between the QEF (1/F) and the classical rate
/// (F^2): the entangled rate carries F^1.
struct Chain {
  EppState epp;
  double rel_flux = 0.0;
  SpectralWidth bw_hz;
  double mode_number_value = 0.0;
  double qef_value = 0.0;
  double qef_err = 0.0;
  bool qef_forced = false;
  double focal = 0.0;
  double classical = 0.0;
  double rel_classical = 0.0;
  double entangled = 0.0;
  double rel_entangled = 0.0;
};

Chain compute_chain(const ExperimentConfig& cfg, std::optional<double> force_qef) {
  Chain ch;
  SpdcSource source = cfg.make_source();
  ch.epp = pair_rate(source, OpticalPower{cfg.pump_power_w});
  ch.rel_flux = rel(cfg.pair_rate_per_watt);
  const double rel_s2 = rel(cfg.sigma2_gm);
  const double rel_col = rel(cfg.eta_col);

  ch.bw_hz = convert_bandwidth(source.bandwidth, WidthRep::fwhm_frequency);
  ch.mode_number_value = mode_number(ch.bw_hz.value, cfg.pump_linewidth_fwhm_hz);

  ch.qef_forced = force_qef.has_value();
  if (ch.qef_forced) {
    ch.qef_value = *force_qef;
    ch.qef_err = 0.0;
  } else {
    ch.qef_value = qef(ch.epp.sigma_epp, PhotonFlux{ch.epp.pair_flux});
    ch.qef_err = ch.qef_value * ch.rel_flux;  // QEF ~ 1/F
  }

  ch.focal = cfg.focal();
  const SampleCell cell = cfg.make_cell();
  const CollectionSetup col = cfg.make_collection();
  ch.classical = classical_tpa_rate(PhotonFlux{ch.epp.photon_flux}, cell, col, ch.focal);
  ch.rel_classical = quad3(2.0 * ch.rel_flux, rel_s2, rel_col);
  ch.entangled = etpa_rate(ch.qef_value, PhotonFlux{ch.epp.photon_flux}, cell, col, ch.focal);
  ch.rel_entangled = ch.qef_forced ? ch.rel_classical : quad3(ch.rel_flux, rel_s2, rel_col);
  return ch;
}

std::vector<double> sweep_values(double from, double to, int points, bool linear) {
  std::vector<double> v;
  v.reserve(points);
  for (int i = 0; i < points; ++i) {
    if (points == 1) {
      v.push_back(from);
    } else if (linear) {
      v.push_back(from + (to - from) * double(i) / double(points - 1));
    } else {
      v.push_back(from * std::pow(to / from, double(i) / double(points - 1)));
    }
  }
  return v;
}

std::string row_key(const char* stem, std::size_t i, const char* field) {
  std::ostringstream k;
  k << stem << "_" << i << "_" << field;
  return k.str();
}

std::string flags_string(const ScanAnalysis::Row& row) {
  std::string f;
  auto add = [&f](const char* name) {
    if (!f.empty()) f += ";";
    f += name;
  };
  if (row.linear_regime) add("linear");
  if (row.dark_clamped) add("dark_clamped");
  if (row.unphysical) add("unphysical");
  if (row.coincidences_replaced) add("replaced");
  return f.empty() ? "-" : f;
}

}  // namespace

std::string run_predict(const PredictOptions& opts) {
  const ExperimentConfig& cfg = opts.cfg;
  Chain ch = compute_chain(cfg, opts.force_qef);

  Report r("predict");
  r.kv("pump_power_w", cfg.pump_power_w);
  r.kv("pair_flux_per_s", ch.epp.pair_flux);
  r.kv("pair_flux_err_per_s", ch.epp.pair_flux * ch.rel_flux);
  r.kv("photon_flux_per_s", ch.epp.photon_flux);
  r.kv("photon_flux_err_per_s", ch.epp.photon_flux * ch.rel_flux);
  r.kv("bandwidth_fwhm_nm", cfg.bandwidth_fwhm_nm);
  r.kv("bandwidth_fwhm_hz", ch.bw_hz.value);
  r.kv("bandwidth_std_rad_per_s", ch.epp.sigma_epp.value);
  r.kv("correlation_time_s", ch.epp.correlation_time);
  r.kv("mode_number", ch.mode_number_value);
  if (ch.epp.pair_flux > 0) {
    const double sep = mean_pair_separation(ch.epp);
    r.kv("mean_pair_separation_s", sep);
    r.kv("separation_over_correlation", sep / ch.epp.correlation_time);
  }
  r.kv("isolated_pairs", is_isolated_pairs(ch.epp));
  r.kv("qef", ch.qef_value);
  r.kv("qef_err", ch.qef_err);
  r.kv("qef_forced", ch.qef_forced);
  r.kv("focal_integral_per_m", ch.focal);
  r.kv("classical_tpa_rate_per_s", ch.classical);
  r.kv("classical_tpa_rate_err_per_s", ch.classical * ch.rel_classical);
  r.kv("etpa_rate_per_s", ch.entangled);
  r.kv("etpa_rate_err_per_s", ch.entangled * ch.rel_entangled);
  return r.str();
}

std::string run_bound(const BoundOptions& opts) {
  const ExperimentConfig& cfg = opts.cfg;
  Chain ch = compute_chain(cfg, std::nullopt);

  const double dark_model =
      threshold_3sigma(cfg.threshold_dark_rate_hz, cfg.threshold_duration_s);
  double thr, thr_err;
  const char* source;
  if (opts.threshold_override) {
    thr = *opts.threshold_override;
    thr_err = 0.0;
    source = "override";
  } else if (cfg.measured_threshold_hz) {
    thr = cfg.measured_threshold_hz->value;
    thr_err = cfg.measured_threshold_hz->err;
    source = "config_measured";
  } else {
    thr = dark_model;
    thr_err = 0.0;
    source = "dark_model";
  }

  EnhancementBound b =
      enhancement_bound(thr, ch.entangled, thr_err, ch.entangled * ch.rel_entangled);

  Report r("bound");
  r.kv("threshold_source", source);
  r.kv("threshold_per_s", b.threshold_rate);
  r.kv("threshold_err_per_s", thr_err);
  r.kv("dark_model_threshold_per_s", dark_model);
  r.kv("threshold_dark_rate_hz", cfg.threshold_dark_rate_hz);
  r.kv("threshold_duration_s", cfg.threshold_duration_s);
  r.kv("etpa_rate_per_s", b.predicted_etpa_rate);
  r.kv("etpa_rate_err_per_s", ch.entangled * ch.rel_entangled);
  r.kv("enhancement_bound", b.bound);
  r.kv("enhancement_bound_err", b.uncertainty);
  return r.str();
}

FitOutput run_fit(const FitOptions& opts) {
  DataSeries series = series_from_table(opts.table, opts.dark_rate);
  DarkSubtracted sub = dark_subtract(series);
  PowerLawFit fit = fit_power_law(sub.series, opts.fixed_exponent);
  const Scaling cls = classify_scaling(fit);

  Report r("fit");
  r.kv("n_rows", std::int64_t(opts.table.rows.size()));
  r.kv("n_excluded_dark", std::int64_t(sub.excluded.size()));
  {
    std::string idx;
    for (std::size_t i : sub.excluded) {
      if (!idx.empty()) idx += ";";
      idx += std::to_string(i);
    }
    r.kv("excluded_rows", idx.empty() ? "-" : idx);
  }
  r.kv("n_points_used", std::int64_t(fit.n_points_used));
  r.kv("dark_rate_hz", opts.dark_rate);
  if (opts.fixed_exponent) r.kv("fixed_exponent", *opts.fixed_exponent);
  r.kv("amplitude", fit.amplitude);
  r.kv("amplitude_err", fit.amplitude * std::sqrt(fit.covariance[0][0]));
  r.kv("exponent", fit.exponent);
  r.kv("exponent_err", fit.exponent_err);
  r.kv("cov_ln_amplitude", fit.covariance[0][0]);
  r.kv("cov_cross", fit.covariance[0][1]);
  r.kv("cov_exponent", fit.covariance[1][1]);
  r.kv("classification", to_string(cls));

  // Plot data: measured points, the fitted curve, and slope-1/slope-2
  // reference lines through the geometric center of the data.
  std::ostringstream plot;
  plot << "# schema=1\nseries,x,y,y_err\n";
  const auto& s = sub.series;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    plot << "data," << fmt(s.x[i]) << "," << fmt(s.y[i]) << ","
         << fmt(s.y_err.empty() ? 0.0 : s.y_err[i]) << "\n";
  }
  const auto [x_min_it, x_max_it] = std::minmax_element(s.x.begin(), s.x.end());
  double ln_xg = 0.0;
  for (double x : s.x) ln_xg += std::log(x);
  const double x_g = std::exp(ln_xg / double(s.x.size()));
  const double y_g = fit.amplitude * std::pow(x_g, fit.exponent);
  const int n_curve = 50;
  for (const char* name : {"fit", "ref_slope1", "ref_slope2"}) {
    for (int i = 0; i < n_curve; ++i) {
      const double x = *x_min_it * std::pow(*x_max_it / *x_min_it,
                                            double(i) / double(n_curve - 1));
      double y;
      if (name[0] == 'f') {
        y = fit.amplitude * std::pow(x, fit.exponent);
      } else {
        const double slope = name[9] == '1' ? 1.0 : 2.0;
        y = y_g * std::pow(x / x_g, slope);
      }
      plot << name << "," << fmt(x) << "," << fmt(y) << ",0\n";
    }
  }
  return FitOutput{r.str(), plot.str()};
}

std::string run_simulate(const SimulateOptions& opts) {
  const ExperimentConfig& cfg = opts.cfg;
  std::vector<std::string> issues;
  if (opts.points < 1) issues.push_back("points must be >= 1");
  if (opts.duration <= 0) issues.push_back("duration must be > 0");
  if (opts.from <= 0 || opts.to <= 0) issues.push_back("sweep endpoints must be > 0");
  if (opts.knob == SweepKnob::attenuation && (opts.from > 1 || opts.to > 1))
    issues.push_back("attenuation endpoints must be <= 1");
  if (cfg.detector_a.dead_time != cfg.detector_b.dead_time)
    issues.push_back("simulate models one shared dead time; detector_a/detector_b differ");
  if (!issues.empty()) throw validation_error(issues);

  const SpdcSource source = cfg.make_source();
  const Wavelength lambda{cfg.center_wavelength_nm * 1e-9};
  const std::vector<double> values =
      sweep_values(opts.from, opts.to, opts.points, opts.linear_spacing);

  std::ostringstream csv;
  csv << "# schema=1\n"
      << "x_kind,x_value,singles_a,singles_b,coincidences,duration_s,attenuation,"
         "dark_counts\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    McConfig mc;
    mc.duration = opts.duration;
    mc.seed = derive_seed(opts.seed, std::uint64_t(i));
    mc.splitter_ratio = cfg.splitter_ratio;
    mc.coincidence_window = cfg.coincidence_window_ns * 1e-9;
    mc.dead_time = cfg.detector_a.dead_time;
    mc.dark_rate_a = cfg.detector_a.dark_rate;
    mc.dark_rate_b = cfg.detector_b.dark_rate;
    mc.arm_transmission_a = cfg.detector_a.efficiency;
    mc.arm_transmission_b = cfg.detector_b.efficiency;

    const char* kind;
    double x, attenuation;
    if (opts.knob == SweepKnob::pump) {
      const EppState epp = pair_rate(source, OpticalPower{v});
      mc.pair_rate = epp.pair_flux;
      mc.pre_split_transmission = cfg.pre_split_transmission;
      kind = "pump_power_w";
      x = v;
      attenuation = 1.0;
    } else {
      const EppState epp = pair_rate(source, OpticalPower{cfg.pump_power_w});
      mc.pair_rate = epp.pair_flux;
      mc.pre_split_transmission = cfg.pre_split_transmission * v;
      kind = "attenuated_power_w";
      x = flux_to_power(PhotonFlux{epp.photon_flux * v}, lambda).watts;
      attenuation = v;
    }

    const McResult res = simulate_stream(mc);
    csv << kind << "," << fmt(x) << "," << res.singles_a << "," << res.singles_b << ","
        << res.coincidences << "," << fmt(opts.duration) << "," << fmt(attenuation)
        << ",0\n";
  }
  return csv.str();
}

std::string run_klyshko(const KlyshkoOptions& opts) {
  const ExperimentConfig& cfg = opts.cfg;
  std::vector<PowerRecord> records = records_from_table(opts.table);

  Report r("klyshko");
  r.kv("n_rows", std::int64_t(records.size()));

  if (records.size() >= 3) {
    const ScanAnalysis an = analyze_pair_scan(records, cfg.detector_a, cfg.detector_b);
    r.kv("bound_method", "klyshko_inversion");
    r.kv("n_linear", std::int64_t(an.n_linear));
    r.kv("linear_fit_exponent", an.linear_fit_exponent);
    r.kv("klyshko_eta_a", an.klyshko.eta_a);
    r.kv("klyshko_eta_a_err", an.klyshko_err.eta_a);
    r.kv("klyshko_eta_b", an.klyshko.eta_b);
    r.kv("klyshko_eta_b_err", an.klyshko_err.eta_b);
    r.kv("heralding_eta_a", an.heralding.eta_a);
    r.kv("heralding_eta_b", an.heralding.eta_b);
    bool overcounting = false;
    for (std::size_t i = 0; i < an.rows.size(); ++i) {
      const auto& row = an.rows[i];
      overcounting = overcounting || row.unphysical;
      r.kv(row_key("row", i, "pump_power_w"), row.pump_power);
      r.kv(row_key("row", i, "singles_a_per_s"), row.corrected.singles_a);
      r.kv(row_key("row", i, "singles_b_per_s"), row.corrected.singles_b);
      r.kv(row_key("row", i, "coincidences_per_s"), row.corrected.coincidences);
      r.kv(row_key("row", i, "pair_rate_per_s"), row.pair_rate_estimate);
      r.kv(row_key("row", i, "pair_rate_err_per_s"), row.pair_rate_err);
      r.kv(row_key("row", i, "flags"), flags_string(row));
    }
    r.kv("overcounting_detected", overcounting);
    r.kv("pair_rate_bound_per_s", an.bound.pairs_per_second);
    r.kv("pair_rate_bound_err_per_s", an.bound.uncertainty);
    return r.str();
  }

  // Too few rows for regime detection: fall back to the conservative bound
  // C / eta_det per row. Dark rates are not subtracted here; with heavy
  // attenuation the corrected counts dominate anyway.
  const double eta_det =
      std::sqrt(cfg.detector_a.efficiency * cfg.detector_b.efficiency);
  if (eta_det <= 0) throw domain_error("conservative bound needs detector efficiency > 0");
  r.kv("bound_method", "conservative");
  r.kv("eta_det", eta_det);
  double best = 0.0, best_err = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AttenuationCorrected cor = correct_for_attenuation(records[i].record);
    const KlyshkoEfficiency k = klyshko_efficiency(cor.record);
    r.kv(row_key("row", i, "pump_power_w"), records[i].pump_power);
    r.kv(row_key("row", i, "klyshko_eta_a"), k.eta_a);
    r.kv(row_key("row", i, "klyshko_eta_b"), k.eta_b);
    r.kv(row_key("row", i, "flags"), cor.unphysical ? "unphysical" : "-");
    const double candidate = cor.record.coincidences / eta_det;
    if (candidate > best) {
      const auto& raw = records[i].record;
      const double c_counts = raw.coincidences * raw.duration;
      const double raw_err = c_counts > 0 ? std::sqrt(c_counts) / raw.duration : 0.0;
      const double att2 = raw.applied_attenuation * raw.applied_attenuation;
      best = candidate;
      best_err = raw_err / att2 / eta_det;
    }
  }
  r.kv("pair_rate_bound_per_s", best);
  r.kv("pair_rate_bound_err_per_s", best_err);
  return r.str();
}

}  // namespace etpa::cli
