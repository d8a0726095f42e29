#pragma once

#include <cstdint>
#include <vector>

namespace etpa {

/// Discrete-event stream parameters. Pairs arrive as a homogeneous Poisson
/// process; both photons share the arrival time (the fs-scale correlation time
/// is far below any realistic coincidence window).
struct McConfig {
  double pair_rate = 0.0;  // pairs/s, >= 0
  double duration = 0.0;   // s, > 0
  std::uint64_t seed = 0;
  double pre_split_transmission = 1.0;  // [0,1], per photon
  double arm_transmission_a = 1.0;      // [0,1]
  double arm_transmission_b = 1.0;      // [0,1]
  double splitter_ratio = 0.5;          // [0,1], P(photon exits arm A)
  double coincidence_window = 1e-9;     // s, > 0
  double dead_time = 0.0;               // s, >= 0, non-paralyzable, per detector
  double dark_rate_a = 0.0;             // counts/s
  double dark_rate_b = 0.0;             // counts/s
};

struct McResult {
  std::int64_t singles_a = 0;
  std::int64_t singles_b = 0;
  std::int64_t coincidences = 0;      // <= min(singles_a, singles_b)
  double accidental_estimate = 0.0;   // expected accidental count, S_a*S_b*w/T
  double elapsed_simulated_time = 0.0;  // s
};

/// Runs the stream: per-photon survival (pre-split, then splitter routing,
/// then arm transmission), independent Poisson dark counts per arm,
/// non-paralyzable dead time in time order, and start-stop coincidence
/// tallying: an arm-A detection opens a gate of one window length, an arm-B
/// detection inside an open gate closes the earliest one as a coincidence.
/// Each detection is consumable by at most one coincidence, and accidentals
/// obey the S_a * S_b * tau_w estimate exactly (a symmetric either-arm gate
/// would double them).
///
/// Survival thinning happens at generation, so runtime scales with detected
/// events, not emitted pairs; the tallied statistics are exact. Memory stays
/// bounded for windows small against the mean detection spacing.
///
/// Determinism contract: identical (config, seed) gives a bit-identical
/// McResult on every run and thread count. RNG identity: mt19937_64 streams
/// seeded via splitmix64, exponential/uniform variates derived from raw bits
/// (no library distribution objects), one stream per event source.
McResult simulate_stream(const McConfig& cfg);

// Standard accidental-coincidence estimate S_a * S_b * tau_w (rates in, rate out).
double accidental_rate(double singles_a, double singles_b, double window);

enum class SweepKnob { pump, attenuation };

struct SweepPoint {
  double value = 0.0;             // the applied factor
  double coincidence_rate = 0.0;  // counts/s
};

// Each factor scales pair_rate (pump) or pre_split_transmission (attenuation)
// relative to cfg. Per-point seeds derive from cfg.seed and the point index,
// so results do not depend on execution order.
std::vector<SweepPoint> scaling_sweep(const McConfig& cfg, SweepKnob knob,
                                      const std::vector<double>& factors);

// splitmix64-based stream derivation shared by sweeps and replications.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace etpa
