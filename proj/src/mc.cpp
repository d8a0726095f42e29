#include "etpa/mc.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>

#include "etpa/errors.hpp"

namespace etpa {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 53-bit uniform in [0,1); bit-stable across standard libraries.
double uniform01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

// Exponential gap; rate 0 pushes the stream past the end of time.
double exp_gap(std::mt19937_64& g, double rate) {
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return -std::log1p(-uniform01(g)) / rate;
}

void check_unit_interval(double v, const char* name) {
  if (!(v >= 0.0) || !(v <= 1.0))
    throw validation_error(std::string("McConfig: ") + name + " must lie in [0,1], got " +
                           std::to_string(v));
}

void validate(const McConfig& cfg) {
  if (!(cfg.pair_rate >= 0.0) || !std::isfinite(cfg.pair_rate))
    throw validation_error("McConfig: pair_rate must be finite and >= 0");
  if (!(cfg.duration > 0.0) || !std::isfinite(cfg.duration))
    throw validation_error("McConfig: duration must be finite and > 0");
  if (!std::isfinite(cfg.pair_rate * cfg.duration))
    throw validation_error("McConfig: pair_rate * duration overflows");
  check_unit_interval(cfg.pre_split_transmission, "pre_split_transmission");
  check_unit_interval(cfg.arm_transmission_a, "arm_transmission_a");
  check_unit_interval(cfg.arm_transmission_b, "arm_transmission_b");
  check_unit_interval(cfg.splitter_ratio, "splitter_ratio");
  if (!(cfg.coincidence_window > 0.0))
    throw validation_error("McConfig: coincidence_window must be > 0");
  if (!(cfg.dead_time >= 0.0)) throw validation_error("McConfig: dead_time must be >= 0");
  if (!(cfg.dark_rate_a >= 0.0) || !(cfg.dark_rate_b >= 0.0))
    throw validation_error("McConfig: dark rates must be >= 0");
}

// Detector state plus the open-gate queue for start-stop window matching.
// Arm A detections open a gate of one window length; an arm B detection
// inside an open gate closes the earliest one as a coincidence. This is the
// counting scheme whose accidental rate is exactly S_a * S_b * tau_w, and it
// preserves coincidences <= min(singles_a, singles_b).
struct Tally {
  double window = 0.0;
  double dead_time = 0.0;
  std::int64_t singles[2] = {0, 0};
  std::int64_t coincidences = 0;
  double last_count[2];
  std::deque<double> open_gates;  // arm-A detection times not yet consumed

  explicit Tally(double w, double dt) : window(w), dead_time(dt) {
    last_count[0] = last_count[1] = -std::numeric_limits<double>::infinity();
  }

  // arm 0 = A, 1 = B
  void detect(int arm, double t) {
    if (t - last_count[arm] < dead_time) return;  // non-paralyzable
    last_count[arm] = t;
    ++singles[arm];
    while (!open_gates.empty() && t - open_gates.front() > window) open_gates.pop_front();
    if (arm == 0) {
      open_gates.push_back(t);
    } else if (!open_gates.empty()) {
      ++coincidences;
      open_gates.pop_front();
    }
  }
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ ((index + 1) * 0x9e3779b97f4a7c15ULL));
}

McResult simulate_stream(const McConfig& cfg) {
  validate(cfg);

  // Per-photon reach-the-detector probabilities.
  const double qa = cfg.pre_split_transmission * cfg.splitter_ratio * cfg.arm_transmission_a;
  const double qb =
      cfg.pre_split_transmission * (1.0 - cfg.splitter_ratio) * cfg.arm_transmission_b;
  const double lost = 1.0 - qa - qb;
  const double p_survive = 1.0 - lost * lost;  // at least one photon detected

  // Pair outcomes conditioned on survival, as cumulative thresholds.
  // both photons: A+B | A+A | B+B ; single survivor: A | B.
  const double p_ab = 2.0 * qa * qb;
  const double p_aa = qa * qa;
  const double p_bb = qb * qb;
  const double p_a_only = 2.0 * qa * lost;
  // remainder of p_survive is B-only

  std::mt19937_64 pair_rng(derive_seed(cfg.seed, 1));
  std::mt19937_64 dark_rng_a(derive_seed(cfg.seed, 2));
  std::mt19937_64 dark_rng_b(derive_seed(cfg.seed, 3));

  const double surviving_rate = cfg.pair_rate * p_survive;
  double t_pair = exp_gap(pair_rng, surviving_rate);
  double t_dark_a = exp_gap(dark_rng_a, cfg.dark_rate_a);
  double t_dark_b = exp_gap(dark_rng_b, cfg.dark_rate_b);

  Tally tally(cfg.coincidence_window, cfg.dead_time);

  while (true) {
    // next event over the three merged streams
    double t = t_pair;
    int which = 0;
    if (t_dark_a < t) { t = t_dark_a; which = 1; }
    if (t_dark_b < t) { t = t_dark_b; which = 2; }
    if (t >= cfg.duration) break;

    switch (which) {
      case 0: {
        const double u = uniform01(pair_rng) * p_survive;
        if (u < p_ab) {
          tally.detect(0, t);
          tally.detect(1, t);
        } else if (u < p_ab + p_aa) {
          tally.detect(0, t);
          tally.detect(0, t);
        } else if (u < p_ab + p_aa + p_bb) {
          tally.detect(1, t);
          tally.detect(1, t);
        } else if (u < p_ab + p_aa + p_bb + p_a_only) {
          tally.detect(0, t);
        } else {
          tally.detect(1, t);
        }
        t_pair += exp_gap(pair_rng, surviving_rate);
        break;
      }
      case 1:
        tally.detect(0, t);
        t_dark_a += exp_gap(dark_rng_a, cfg.dark_rate_a);
        break;
      case 2:
        tally.detect(1, t);
        t_dark_b += exp_gap(dark_rng_b, cfg.dark_rate_b);
        break;
    }
  }

  McResult result;
  result.singles_a = tally.singles[0];
  result.singles_b = tally.singles[1];
  result.coincidences = tally.coincidences;
  result.elapsed_simulated_time = cfg.duration;
  result.accidental_estimate =
      accidental_rate(double(result.singles_a) / cfg.duration,
                      double(result.singles_b) / cfg.duration, cfg.coincidence_window) *
      cfg.duration;
  return result;
}

double accidental_rate(double singles_a, double singles_b, double window) {
  if (!(singles_a >= 0.0) || !(singles_b >= 0.0) || !(window >= 0.0))
    throw domain_error("accidental_rate: inputs must be >= 0");
  return singles_a * singles_b * window;
}

std::vector<SweepPoint> scaling_sweep(const McConfig& cfg, SweepKnob knob,
                                      const std::vector<double>& factors) {
  std::vector<SweepPoint> out;
  out.reserve(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const double f = factors[i];
    if (!(f >= 0.0) || !std::isfinite(f))
      throw validation_error("scaling_sweep: factors must be finite and >= 0");
    McConfig point = cfg;
    point.seed = derive_seed(cfg.seed, i);
    if (knob == SweepKnob::pump) {
      point.pair_rate = cfg.pair_rate * f;
    } else {
      point.pre_split_transmission = cfg.pre_split_transmission * f;
      if (point.pre_split_transmission > 1.0)
        throw validation_error("scaling_sweep: attenuation factor pushes transmission above 1");
    }
    const McResult r = simulate_stream(point);
    out.push_back({f, double(r.coincidences) / point.duration});
  }
  return out;
}

}  // namespace etpa
