#include "etpa/detection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "etpa/errors.hpp"
#include "etpa/fit.hpp"

namespace etpa {

LossSplit propagate_loss(double pair_flux, LossElement eta) {
  if (!(pair_flux >= 0.0)) throw domain_error("propagate_loss: pair flux must be >= 0");
  if (eta.transmission < 0.0 || eta.transmission > 1.0)
    throw domain_error("propagate_loss: transmission must lie in [0,1]");
  return {2.0 * pair_flux * eta.transmission,
          pair_flux * eta.transmission * eta.transmission};
}

KlyshkoEfficiency klyshko_efficiency(const CountRecord& record) {
  if (!(record.singles_a > 0.0) || !(record.singles_b > 0.0))
    throw domain_error("klyshko_efficiency: singles rates must be > 0 on both arms");
  return {record.coincidences / record.singles_b, record.coincidences / record.singles_a};
}

AttenuationCorrected correct_for_attenuation(const CountRecord& record) {
  const double eta = record.applied_attenuation;
  if (!(eta > 0.0) || eta > 1.0)
    throw domain_error("correct_for_attenuation: attenuation must lie in (0,1], got " +
                       std::to_string(eta));
  AttenuationCorrected out;
  out.record = record;
  out.record.singles_a = record.singles_a / eta;
  out.record.singles_b = record.singles_b / eta;
  out.record.coincidences = record.coincidences / (eta * eta);
  out.record.applied_attenuation = 1.0;
  out.unphysical = out.record.coincidences > out.record.singles_a ||
                   out.record.coincidences > out.record.singles_b;
  return out;
}

double dead_time_response(double true_rate, double dead_time) {
  if (!(true_rate >= 0.0) || !(dead_time >= 0.0))
    throw domain_error("dead_time_response: inputs must be >= 0");
  return true_rate / (1.0 + true_rate * dead_time);
}

double threshold_3sigma(double dark_rate, double duration) {
  if (dark_rate < 0.0) throw domain_error("threshold_3sigma: dark rate must be >= 0");
  if (!(duration > 0.0)) throw domain_error("threshold_3sigma: duration must be > 0");
  return 3.0 * std::sqrt(dark_rate * duration) / duration;
}

namespace {

// Shot-noise relative error of a rate from its raw count total.
double rel_shot(double rate, double duration) {
  const double counts = rate * duration;
  return counts > 0.0 ? 1.0 / std::sqrt(counts) : 0.0;
}

}  // namespace

ScanAnalysis analyze_pair_scan(std::vector<PowerRecord> records,
                               const DetectorModel& det_a, const DetectorModel& det_b) {
  if (records.empty()) throw domain_error("analyze_pair_scan: no records");
  std::stable_sort(records.begin(), records.end(),
                   [](const PowerRecord& l, const PowerRecord& r) {
                     return l.pump_power < r.pump_power;
                   });

  ScanAnalysis out;
  out.rows.reserve(records.size());
  for (const auto& pr : records) {
    ScanAnalysis::Row row;
    row.pump_power = pr.pump_power;
    CountRecord rec = pr.record;
    if (!(rec.duration > 0.0))
      throw validation_error("analyze_pair_scan: record duration must be > 0");
    // dark subtraction happens on raw (attenuated) rates, before correction
    rec.singles_a -= det_a.dark_rate;
    rec.singles_b -= det_b.dark_rate;
    if (rec.singles_a < 0.0 || rec.singles_b < 0.0) {
      row.dark_clamped = true;
      rec.singles_a = std::max(rec.singles_a, 0.0);
      rec.singles_b = std::max(rec.singles_b, 0.0);
    }
    auto corrected = correct_for_attenuation(rec);
    row.corrected = corrected.record;
    row.unphysical = corrected.unphysical;
    out.rows.push_back(row);
  }

  // Linear-regime prefix: longest low-power run of clean rows whose
  // free-exponent fit lands in [0.9, 1.1]. Unphysical rows end the prefix.
  std::size_t usable_prefix = 0;
  while (usable_prefix < out.rows.size() && !out.rows[usable_prefix].unphysical &&
         out.rows[usable_prefix].corrected.coincidences > 0.0)
    ++usable_prefix;

  std::size_t n_linear = 0;
  double lin_exponent = 0.0;
  for (std::size_t k = usable_prefix; k >= 3; --k) {
    DataSeries s;
    s.duration = out.rows[0].corrected.duration;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& row = out.rows[i];
      s.x.push_back(row.pump_power);
      s.y.push_back(row.corrected.coincidences);
      // shot noise of the raw coincidence count, scaled like the correction
      const double eta = records[i].record.applied_attenuation;
      const double raw_counts = records[i].record.coincidences * row.corrected.duration;
      s.y_err.push_back(raw_counts > 0.0
                            ? std::sqrt(raw_counts) / row.corrected.duration / (eta * eta)
                            : 0.0);
    }
    PowerLawFit fit;
    try {
      fit = fit_power_law(s);
    } catch (const domain_error&) {
      continue;
    }
    if (fit.exponent >= 0.9 && fit.exponent <= 1.1) {
      n_linear = k;
      lin_exponent = fit.exponent;
      break;
    }
  }
  if (n_linear < 3)
    throw domain_error("analyze_pair_scan: fewer than 3 linear-regime records "
                       "(free-exponent fit never landed in [0.9, 1.1])");
  out.n_linear = n_linear;
  out.linear_fit_exponent = lin_exponent;
  for (std::size_t i = 0; i < n_linear; ++i) out.rows[i].linear_regime = true;

  // Count-weighted Klyshko efficiencies over the linear regime. Corrected
  // rates remove the attenuator; raw counts set the shot noise.
  double cw_c = 0, cw_sa = 0, cw_sb = 0;        // corrected counts
  double raw_c = 0, raw_sa = 0, raw_sb = 0;     // raw counts
  for (std::size_t i = 0; i < n_linear; ++i) {
    const auto& row = out.rows[i];
    const double t = row.corrected.duration;
    cw_c += row.corrected.coincidences * t;
    cw_sa += row.corrected.singles_a * t;
    cw_sb += row.corrected.singles_b * t;
    raw_c += records[i].record.coincidences * t;
    raw_sa += records[i].record.singles_a * t;
    raw_sb += records[i].record.singles_b * t;
  }
  if (!(cw_sa > 0.0) || !(cw_sb > 0.0) || !(cw_c > 0.0))
    throw domain_error("analyze_pair_scan: linear-regime counts vanish");
  out.klyshko.eta_a = cw_c / cw_sb;
  out.klyshko.eta_b = cw_c / cw_sa;
  const double rel_c = raw_c > 0 ? 1.0 / std::sqrt(raw_c) : 0.0;
  out.klyshko_err.eta_a =
      out.klyshko.eta_a * std::hypot(rel_c, raw_sb > 0 ? 1.0 / std::sqrt(raw_sb) : 0.0);
  out.klyshko_err.eta_b =
      out.klyshko.eta_b * std::hypot(rel_c, raw_sa > 0 ? 1.0 / std::sqrt(raw_sa) : 0.0);
  if (det_a.efficiency > 0.0) out.heralding.eta_a = out.klyshko.eta_a / det_a.efficiency;
  if (det_b.efficiency > 0.0) out.heralding.eta_b = out.klyshko.eta_b / det_b.efficiency;

  // Per-row source-rate estimate via the Klyshko inversion. Outside the
  // linear regime (or when flagged) the measured coincidences are replaced by
  // the singles-based estimate, reproducing the singles x eta_K procedure.
  const double rel_eta = std::max(out.klyshko.eta_a > 0 ? out.klyshko_err.eta_a / out.klyshko.eta_a : 0.0,
                                  out.klyshko.eta_b > 0 ? out.klyshko_err.eta_b / out.klyshko.eta_b : 0.0);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    auto& row = out.rows[i];
    const double sa = row.corrected.singles_a;
    const double sb = row.corrected.singles_b;
    if (!(sa > 0.0) || !(sb > 0.0)) continue;
    const double t = row.corrected.duration;
    const double rel_sa = rel_shot(records[i].record.singles_a, t);
    const double rel_sb = rel_shot(records[i].record.singles_b, t);
    double coinc = row.corrected.coincidences;
    double rel2;
    if (row.linear_regime && !row.unphysical && coinc > 0.0) {
      const double rel_cc = rel_shot(records[i].record.coincidences, t);
      rel2 = rel_sa * rel_sa + rel_sb * rel_sb + rel_cc * rel_cc;
    } else {
      row.coincidences_replaced = true;
      coinc = 0.5 * (out.klyshko.eta_a * sb + out.klyshko.eta_b * sa);
      row.corrected.coincidences = coinc;
      rel2 = rel_sa * rel_sa + rel_sb * rel_sb + rel_eta * rel_eta;
    }
    if (!(coinc > 0.0)) continue;
    row.pair_rate_estimate = sa * sb / (2.0 * coinc);
    row.pair_rate_err = row.pair_rate_estimate * std::sqrt(rel2);
  }

  for (const auto& row : out.rows) {
    if (row.pair_rate_estimate > out.bound.pairs_per_second) {
      out.bound.pairs_per_second = row.pair_rate_estimate;
      out.bound.uncertainty = row.pair_rate_err;
    }
  }
  return out;
}

PairRateBound bound_pair_rate(const std::vector<PowerRecord>& records,
                              const DetectorModel& detector) {
  return analyze_pair_scan(records, detector, detector).bound;
}

}  // namespace etpa
