#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace etpa {

/// One measured scaling series. y_err/x_err may be left empty (unknown);
/// dark_subtract fills y_err from Poisson statistics.
struct DataSeries {
  std::vector<double> x;      // power [W] or flux [1/s], > 0
  std::vector<double> y;      // count rates [1/s]
  std::vector<double> y_err;  // [1/s]
  std::vector<double> x_err;  // carried for reporting, never folded into the fit
  double duration = 0.0;      // s, acquisition time per point
  double dark_rate = 0.0;     // counts/s
};

/// amplitude * x^exponent. Covariance is over (ln amplitude, exponent).
struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double exponent_err = 0.0;
  std::array<std::array<double, 2>, 2> covariance{{{0.0, 0.0}, {0.0, 0.0}}};
  std::size_t n_points_used = 0;
};

struct DarkSubtracted {
  DataSeries series;
  std::vector<std::size_t> excluded;  // input indices dropped (y - dark <= 0)
};

// y' = y - dark_rate; non-positive results are dropped and recorded. y_err is
// recomputed as sqrt((y_raw + dark)*T)/T, both Poisson terms included.
DarkSubtracted dark_subtract(const DataSeries& series);

// Weighted least squares on (ln x, ln y) with weights (y/y_err)^2, or
// unweighted when y_err is empty. fixed_exponent pins the slope and fits the
// intercept only. Points with y <= 0 are skipped.
PowerLawFit fit_power_law(const DataSeries& series,
                          std::optional<double> fixed_exponent = std::nullopt);

enum class Scaling { linear, quadratic, mixed, indeterminate };

// 3-sigma window against slopes 1 and 2.
Scaling classify_scaling(const PowerLawFit& fit);

const char* to_string(Scaling s);

}  // namespace etpa
