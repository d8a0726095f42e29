#include "etpa/detection.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "etpa/errors.hpp"

using namespace etpa;
using doctest::Approx;

TEST_CASE("loss thinning splits singles and intact pairs") {
  const LossSplit s = propagate_loss(1.0e6, {0.5});
  CHECK(s.single_rate == Approx(1.0e6));
  CHECK(s.pair_rate == Approx(2.5e5));
  const LossSplit id = propagate_loss(7.0e8, {1.0});
  CHECK(id.single_rate == Approx(1.4e9));
  CHECK(id.pair_rate == Approx(7.0e8));
  CHECK(propagate_loss(1.0e6, {0.0}).pair_rate == 0.0);
  CHECK_THROWS_AS(propagate_loss(-1.0, {0.5}), domain_error);
  CHECK_THROWS_AS(propagate_loss(1.0, {1.5}), domain_error);
}

TEST_CASE("klyshko efficiency crosses the arms") {
  CountRecord r;
  r.singles_a = 1.0e5;
  r.singles_b = 2.0e5;
  r.coincidences = 2.0e4;
  r.duration = 1.0;
  const KlyshkoEfficiency k = klyshko_efficiency(r);
  CHECK(k.eta_a == Approx(0.1));
  CHECK(k.eta_b == Approx(0.2));
  r.singles_b = 0.0;
  CHECK_THROWS_AS(klyshko_efficiency(r), domain_error);
}

TEST_CASE("attenuation correction flags over-counting") {
  CountRecord r;
  r.singles_a = 200.0;
  r.singles_b = 180.0;
  r.coincidences = 150.0;
  r.duration = 10.0;
  r.applied_attenuation = 0.01;
  const AttenuationCorrected c = correct_for_attenuation(r);
  CHECK(c.record.singles_a == Approx(2.0e4));
  CHECK(c.record.singles_b == Approx(1.8e4));
  CHECK(c.record.coincidences == Approx(1.5e6));
  CHECK(c.record.applied_attenuation == 1.0);
  CHECK(c.unphysical);

  CountRecord ok = r;
  ok.singles_a = ok.singles_b = 1000.0;
  ok.coincidences = 100.0;
  ok.applied_attenuation = 0.5;
  const AttenuationCorrected cc = correct_for_attenuation(ok);
  CHECK(cc.record.coincidences == Approx(400.0));
  CHECK_FALSE(cc.unphysical);

  CountRecord bad = r;
  bad.applied_attenuation = 0.0;
  CHECK_THROWS_AS(correct_for_attenuation(bad), domain_error);
  bad.applied_attenuation = 1.5;
  CHECK_THROWS_AS(correct_for_attenuation(bad), domain_error);
}

TEST_CASE("non-paralyzable dead time response") {
  CHECK(dead_time_response(1.0e7, 50.0e-9) == Approx(6666666.666666667).epsilon(1e-12));
  CHECK(dead_time_response(1234.5, 0.0) == 1234.5);
  CHECK(dead_time_response(0.0, 1e-6) == 0.0);
  // saturates below 1/tau
  CHECK(dead_time_response(1.0e12, 50.0e-9) < 1.0 / 50.0e-9);
  CHECK_THROWS_AS(dead_time_response(-1.0, 0.0), domain_error);
}

TEST_CASE("detection threshold from dark noise") {
  CHECK(threshold_3sigma(100.0, 1800.0) == Approx(0.7071067811865476).epsilon(1e-14));
  // 3*sqrt(D/T): quadrupling the duration halves the threshold
  CHECK(threshold_3sigma(100.0, 7200.0) ==
        Approx(0.5 * threshold_3sigma(100.0, 1800.0)).epsilon(1e-12));
  CHECK(threshold_3sigma(0.0, 10.0) == 0.0);
  CHECK_THROWS_AS(threshold_3sigma(-1.0, 10.0), domain_error);
  CHECK_THROWS_AS(threshold_3sigma(1.0, 0.0), domain_error);
}

namespace {

// Exact loss-chain rates for pair rate R and per-arm capture q: the inversion
// S_a*S_b/(2C) then returns R identically, no estimator bias to budget for.
PowerRecord exact_record(double pump_power, double pairs_per_watt, double q_a, double q_b,
                         double dark, double attenuation, double duration) {
  const double rate = pairs_per_watt * pump_power;
  PowerRecord pr;
  pr.pump_power = pump_power;
  pr.record.singles_a = 2.0 * rate * q_a * attenuation + dark;
  pr.record.singles_b = 2.0 * rate * q_b * attenuation + dark;
  pr.record.coincidences = 2.0 * rate * q_a * q_b * attenuation * attenuation;
  pr.record.duration = duration;
  pr.record.applied_attenuation = attenuation;
  return pr;
}

}  // namespace

TEST_CASE("pair scan analysis recovers the source rate from exact records") {
  const double R_w = 2.0e9;      // pairs/s/W
  const double q = 0.16;         // pre-split x splitter x detector
  const double dark = 100.0;
  DetectorModel det;
  det.efficiency = 0.8;
  det.dark_rate = dark;

  std::vector<PowerRecord> records;
  for (double p : {1.0, 0.25, 0.5})  // deliberately unsorted
    records.push_back(exact_record(p, R_w, q, q, dark, 1.0, 1.0));
  // accidental-dominated high-power row behind a strong attenuator: the
  // measured coincidences over-correct past the singles and must be replaced
  PowerRecord high = exact_record(4.0, R_w, q, q, dark, 0.01, 1.0);
  high.record.coincidences = 3.0e5;  // >> true 4.096e4, mimics pile-up
  records.push_back(high);

  const ScanAnalysis a = analyze_pair_scan(records, det, det);
  REQUIRE(a.rows.size() == 4);
  CHECK(a.rows.front().pump_power == 0.25);  // sorted ascending
  CHECK(a.n_linear == 3);
  CHECK(a.linear_fit_exponent == Approx(1.0).epsilon(1e-9));
  CHECK(a.klyshko.eta_a == Approx(q).epsilon(1e-12));
  CHECK(a.klyshko.eta_b == Approx(q).epsilon(1e-12));
  CHECK(a.heralding.eta_a == Approx(q / det.efficiency).epsilon(1e-12));

  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.rows[i].linear_regime);
    CHECK_FALSE(a.rows[i].coincidences_replaced);
    CHECK(a.rows[i].pair_rate_estimate ==
          Approx(R_w * a.rows[i].pump_power).epsilon(1e-9));
  }
  CHECK(a.rows[3].unphysical);
  CHECK(a.rows[3].coincidences_replaced);
  CHECK_FALSE(a.rows[3].linear_regime);
  // singles x eta_K substitution makes the inversion exact again
  CHECK(a.rows[3].pair_rate_estimate == Approx(4.0 * R_w).epsilon(1e-9));

  CHECK(a.bound.pairs_per_second == Approx(4.0 * R_w).epsilon(1e-9));
  CHECK(a.bound.uncertainty > 0.0);
  // the bound can never exceed what the corrected singles alone would allow
  for (const auto& row : a.rows) {
    if (row.pair_rate_estimate == 0.0) continue;
    const double singles_cap =
        row.corrected.singles_a / (2.0 * a.klyshko.eta_a * a.klyshko.eta_b);
    CHECK(row.pair_rate_estimate <= singles_cap * (1.0 + 1e-9));
  }

  const PairRateBound wrapped = bound_pair_rate(records, det);
  CHECK(wrapped.pairs_per_second == a.bound.pairs_per_second);
  CHECK(wrapped.uncertainty == a.bound.uncertainty);
}

TEST_CASE("pair scan flags rows eaten by dark subtraction") {
  DetectorModel det;
  det.efficiency = 0.8;
  det.dark_rate = 100.0;
  std::vector<PowerRecord> records;
  for (double p : {0.25, 0.5, 1.0})
    records.push_back(exact_record(p, 2.0e9, 0.16, 0.16, det.dark_rate, 1.0, 1.0));
  PowerRecord starved;
  starved.pump_power = 8.0;
  starved.record.singles_a = 50.0;  // below the dark rate
  starved.record.singles_b = 50.0;
  starved.record.coincidences = 1.0e-3;
  starved.record.duration = 1.0;
  records.push_back(starved);

  const ScanAnalysis a = analyze_pair_scan(records, det, det);
  CHECK(a.n_linear == 3);
  CHECK(a.rows[3].dark_clamped);
  CHECK(a.rows[3].pair_rate_estimate == 0.0);
  CHECK(a.bound.pairs_per_second == Approx(2.0e9).epsilon(1e-9));
}

TEST_CASE("pair scan refuses data without a linear regime") {
  DetectorModel det;
  det.efficiency = 0.8;
  std::vector<PowerRecord> quad;
  for (double p : {1.0, 2.0, 4.0, 8.0}) {
    PowerRecord pr;
    pr.pump_power = p;
    pr.record.singles_a = pr.record.singles_b = 1.0e6 * p;
    pr.record.coincidences = 1.0e3 * p * p;  // coincidences scale quadratically
    pr.record.duration = 1.0;
    quad.push_back(pr);
  }
  CHECK_THROWS_AS(analyze_pair_scan(quad, det, det), domain_error);

  std::vector<PowerRecord> two(quad.begin(), quad.begin() + 2);
  CHECK_THROWS_AS(analyze_pair_scan(two, det, det), domain_error);
  CHECK_THROWS_AS(analyze_pair_scan({}, det, det), domain_error);

  PowerRecord bad = quad[0];
  bad.record.duration = 0.0;
  CHECK_THROWS_AS(analyze_pair_scan({quad[0], quad[1], bad}, det, det),
                  validation_error);
}
