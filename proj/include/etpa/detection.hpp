#pragma once

#include <cstddef>
#include <vector>

namespace etpa {

struct LossElement {
  double transmission = 1.0;  // [0,1]
};

struct DetectorModel {
  double efficiency = 1.0;  // [0,1]
  double dead_time = 0.0;   // s, >= 0
  double dark_rate = 0.0;   // counts/s, >= 0

  bool operator==(const DetectorModel&) const = default;
};

/// One coincidence measurement. Rates are per second; counts recover as
/// rate * duration. For physically valid raw data
/// coincidences <= min(singles_a, singles_b).
struct CountRecord {
  double singles_a = 0.0;            // counts/s
  double singles_b = 0.0;            // counts/s
  double coincidences = 0.0;         // counts/s
  double duration = 0.0;             // s, > 0
  double applied_attenuation = 1.0;  // transmission, (0,1]
};

struct PairRateBound {
  double pairs_per_second = 0.0;
  double uncertainty = 0.0;
};

struct LossSplit {
  double single_rate = 0.0;  // photons/s surviving, 2*R*eta
  double pair_rate = 0.0;    // intact pairs/s, R*eta^2
};

// Binomial thinning of a pair stream by a per-photon transmission.
LossSplit propagate_loss(double pair_flux, LossElement eta);

struct KlyshkoEfficiency {
  double eta_a = 0.0;  // C/S_b: arm-A efficiency from arm-B heralds
  double eta_b = 0.0;  // C/S_a
};

KlyshkoEfficiency klyshko_efficiency(const CountRecord& record);

struct AttenuationCorrected {
  CountRecord record;       // singles / eta, coincidences / eta^2
  bool unphysical = false;  // corrected coincidences exceed a corrected singles rate
};

AttenuationCorrected correct_for_attenuation(const CountRecord& record);

// Non-paralyzable counter: R / (1 + R*tau_d).
double dead_time_response(double true_rate, double dead_time);

// 3 * sqrt(dark_rate * duration) / duration: Poisson noise of the dark total
// as a rate.
double threshold_3sigma(double dark_rate, double duration);

struct PowerRecord {
  double pump_power = 0.0;  // W
  CountRecord record;
};

/// Full audit trail of the pair-rate bound procedure, one entry per input
/// record (sorted by pump power).
struct ScanAnalysis {
  struct Row {
    double pump_power = 0.0;
    CountRecord corrected;            // dark-subtracted then attenuation-corrected
    bool dark_clamped = false;        // singles went negative after subtraction
    bool unphysical = false;
    bool linear_regime = false;
    bool coincidences_replaced = false;  // singles x eta_K substituted
    double pair_rate_estimate = 0.0;     // Klyshko inversion S_a*S_b/(2C)
    double pair_rate_err = 0.0;
  };
  std::vector<Row> rows;
  std::size_t n_linear = 0;
  double linear_fit_exponent = 0.0;
  KlyshkoEfficiency klyshko;       // count-weighted over the linear regime
  KlyshkoEfficiency klyshko_err;
  KlyshkoEfficiency heralding;     // klyshko / detector efficiency
  PairRateBound bound;             // max pair-rate estimate over rows
};

// Bound procedure: dark subtraction, attenuation correction with
// over-counting guard, linear-regime prefix (free-exponent fit within
// [0.9, 1.1]), Klyshko efficiencies from that prefix, coincidences of the
// remaining rows replaced by singles x eta_K, then the Klyshko inversion
// R = S_a*S_b/(2C) per row. Detector efficiency cancels in the inversion; it
// enters the reported heralding efficiencies.
ScanAnalysis analyze_pair_scan(std::vector<PowerRecord> records,
                               const DetectorModel& det_a, const DetectorModel& det_b);

// Symmetric-detector convenience wrapper returning just the bound.
PairRateBound bound_pair_rate(const std::vector<PowerRecord>& records,
                              const DetectorModel& detector);

}  // namespace etpa
