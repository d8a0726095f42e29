#include "etpa/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "etpa/errors.hpp"

namespace etpa {

DarkSubtracted dark_subtract(const DataSeries& series) {
  const std::size_t n = series.x.size();
  if (series.y.size() != n)
    throw validation_error("dark_subtract: x and y lengths differ");
  if (!(series.duration > 0.0))
    throw validation_error("dark_subtract: duration must be > 0");
  if (series.dark_rate < 0.0)
    throw validation_error("dark_subtract: dark rate must be >= 0");

  DarkSubtracted out;
  out.series.duration = series.duration;
  out.series.dark_rate = 0.0;  // consumed
  const double t = series.duration;
  for (std::size_t i = 0; i < n; ++i) {
    const double net = series.y[i] - series.dark_rate;
    if (!(net > 0.0)) {
      out.excluded.push_back(i);
      continue;
    }
    out.series.x.push_back(series.x[i]);
    out.series.y.push_back(net);
    // raw counts plus dark-reference counts, both Poisson
    out.series.y_err.push_back(std::sqrt((series.y[i] + series.dark_rate) * t) / t);
    if (i < series.x_err.size()) out.series.x_err.push_back(series.x_err[i]);
  }
  return out;
}

PowerLawFit fit_power_law(const DataSeries& series, std::optional<double> fixed_exponent) {
  const std::size_t n = series.x.size();
  if (series.y.size() != n)
    throw validation_error("fit_power_law: x and y lengths differ");
  if (!series.y_err.empty() && series.y_err.size() != n)
    throw validation_error("fit_power_law: y_err length differs from y");

  // log-domain points; y <= 0 excluded per dark_subtract contract
  std::vector<double> u, v, w;
  const bool weighted = !series.y_err.empty();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(series.x[i] > 0.0))
      throw validation_error("fit_power_law: x must be strictly positive (point " +
                             std::to_string(i) + ")");
    if (!(series.y[i] > 0.0)) continue;
    if (weighted && !(series.y_err[i] > 0.0))
      throw validation_error("fit_power_law: y_err must be > 0 when provided (point " +
                             std::to_string(i) + ")");
    u.push_back(std::log(series.x[i]));
    v.push_back(std::log(series.y[i]));
    w.push_back(weighted ? (series.y[i] / series.y_err[i]) * (series.y[i] / series.y_err[i])
                         : 1.0);
  }

  const std::size_t m = u.size();
  const std::size_t needed = fixed_exponent ? 2u : 3u;
  if (m < needed)
    throw domain_error("fit_power_law: insufficient data, " + std::to_string(m) +
                       " usable points, need >= " + std::to_string(needed));

  PowerLawFit fit;
  fit.n_points_used = m;

  double sw = 0, swu = 0, swv = 0, swuu = 0, swuv = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sw += w[i];
    swu += w[i] * u[i];
    swv += w[i] * v[i];
    swuu += w[i] * u[i] * u[i];
    swuv += w[i] * u[i] * v[i];
  }

  if (fixed_exponent) {
    const double b = *fixed_exponent;
    const double a = (swv - b * swu) / sw;  // weighted mean of v - b*u
    fit.exponent = b;
    fit.amplitude = std::exp(a);
    fit.exponent_err = 0.0;
    double var_a;
    if (weighted) {
      var_a = 1.0 / sw;
    } else {
      double rss = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = v[i] - (a + b * u[i]);
        rss += r * r;
      }
      var_a = (m > 1) ? rss / double(m - 1) / double(m) : 0.0;
    }
    fit.covariance = {{{var_a, 0.0}, {0.0, 0.0}}};
    return fit;
  }

  double umin = u[0], umax = u[0];
  for (double ui : u) {
    umin = std::min(umin, ui);
    umax = std::max(umax, ui);
  }
  // rounding can leave det marginally positive for identical x, so check spread
  const double det = sw * swuu - swu * swu;
  if (!(umax > umin) || !(det > 0.0) || !std::isfinite(det))
    throw domain_error("fit_power_law: degenerate design (all x equal?)");

  const double b = (sw * swuv - swu * swv) / det;   // slope = exponent
  const double a = (swuu * swv - swu * swuv) / det; // intercept = ln amplitude

  // (X^T W X)^-1; for unit weights scale by residual variance with n-2 dof
  double scale = 1.0;
  if (!weighted) {
    double rss = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = v[i] - (a + b * u[i]);
      rss += r * r;
    }
    scale = (m > 2) ? rss / double(m - 2) : 0.0;
  }
  fit.exponent = b;
  fit.amplitude = std::exp(a);
  fit.covariance = {{{scale * swuu / det, -scale * swu / det},
                     {-scale * swu / det, scale * sw / det}}};
  fit.exponent_err = std::sqrt(fit.covariance[1][1]);
  return fit;
}

Scaling classify_scaling(const PowerLawFit& fit) {
  const double band = 3.0 * fit.exponent_err;
  const bool lin = std::abs(fit.exponent - 1.0) <= band;
  const bool quad = std::abs(fit.exponent - 2.0) <= band;
  if (lin && !quad) return Scaling::linear;
  if (quad && !lin) return Scaling::quadratic;
  if (!lin && !quad && fit.exponent > 1.0 && fit.exponent < 2.0) return Scaling::mixed;
  return Scaling::indeterminate;
}

const char* to_string(Scaling s) {
  switch (s) {
    case Scaling::linear: return "linear";
    case Scaling::quadratic: return "quadratic";
    case Scaling::mixed: return "mixed";
    case Scaling::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace etpa
