#include "etpa/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "etpa/errors.hpp"

namespace etpa::cli {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double* out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return false;
  if (!std::isfinite(v)) return false;
  *out = v;
  return true;
}

std::string fmt_line(int line_no, const std::string& msg) {
  return "line " + std::to_string(line_no) + ": " + msg;
}

// One config key: where it lands and what is allowed.
struct KeySpec {
  bool required = false;
  bool accepts_err = false;
  std::function<void(ExperimentConfig&, const Uncertain&)> apply;
};

std::map<std::string, KeySpec> key_table() {
  using C = ExperimentConfig;
  auto plain = [](double C::* field) {
    return [field](C& c, const Uncertain& u) { c.*field = u.value; };
  };
  auto opt = [](std::optional<double> C::* field) {
    return [field](C& c, const Uncertain& u) { c.*field = u.value; };
  };
  std::map<std::string, KeySpec> t;
  t["source.pair_rate_per_watt"] = {true, true,
      [](C& c, const Uncertain& u) { c.pair_rate_per_watt = u; }};
  t["source.saturation_power_w"] = {false, false, opt(&C::saturation_power_w)};
  t["source.pump_power_w"] = {true, false, plain(&C::pump_power_w)};
  t["source.bandwidth_fwhm_nm"] = {true, false, plain(&C::bandwidth_fwhm_nm)};
  t["source.center_wavelength_nm"] = {true, false, plain(&C::center_wavelength_nm)};
  t["source.pump_linewidth_fwhm_hz"] = {true, false, plain(&C::pump_linewidth_fwhm_hz)};
  t["beam.focal_integral_per_m"] = {false, false, opt(&C::focal_integral_per_m)};
  t["beam.waist_radius_um"] = {false, false, opt(&C::waist_radius_um)};
  t["beam.waist_position_mm"] = {false, false, plain(&C::waist_position_mm)};
  t["cell.length_mm"] = {true, false, plain(&C::cell_length_mm)};
  t["cell.center_offset_mm"] = {false, false, plain(&C::cell_center_offset_mm)};
  t["cell.concentration_mmol_per_l"] = {true, false, plain(&C::concentration_mmol_per_l)};
  t["cell.sigma2_gm"] = {true, true,
      [](C& c, const Uncertain& u) { c.sigma2_gm = u; }};
  t["cell.fluorescence_yield"] = {true, false, plain(&C::fluorescence_yield)};
  t["collection.eta_col"] = {true, true,
      [](C& c, const Uncertain& u) { c.eta_col = u; }};
  t["collection.eta_det"] = {true, false, plain(&C::eta_det)};
  t["detector_a.efficiency"] = {true, false,
      [](C& c, const Uncertain& u) { c.detector_a.efficiency = u.value; }};
  t["detector_a.dead_time_ns"] = {true, false,
      [](C& c, const Uncertain& u) { c.detector_a.dead_time = u.value * 1e-9; }};
  t["detector_a.dark_rate_hz"] = {true, false,
      [](C& c, const Uncertain& u) { c.detector_a.dark_rate = u.value; }};
  t["detector_b.efficiency"] = {true, false,
      [](C& c, const Uncertain& u) { c.detector_b.efficiency = u.value; }};
  t["detector_b.dead_time_ns"] = {true, false,
      [](C& c, const Uncertain& u) { c.detector_b.dead_time = u.value * 1e-9; }};
  t["detector_b.dark_rate_hz"] = {true, false,
      [](C& c, const Uncertain& u) { c.detector_b.dark_rate = u.value; }};
  t["splitter.ratio"] = {false, false, plain(&C::splitter_ratio)};
  t["splitter.pre_transmission"] = {false, false, plain(&C::pre_split_transmission)};
  t["coincidence.window_ns"] = {true, false, plain(&C::coincidence_window_ns)};
  t["threshold.dark_rate_hz"] = {true, false, plain(&C::threshold_dark_rate_hz)};
  t["threshold.duration_s"] = {true, false, plain(&C::threshold_duration_s)};
  t["threshold.measured_rate_hz"] = {false, true,
      [](C& c, const Uncertain& u) { c.measured_threshold_hz = u; }};
  return t;
}

void check_range(std::vector<std::string>& issues, const char* key, double v,
                 double lo, double hi, bool lo_open = false) {
  bool bad = lo_open ? (v <= lo) : (v < lo);
  if (v > hi) bad = true;
  if (bad) {
    char buf[160];
    const char* lb = lo_open ? "(" : "[";
    if (hi == std::numeric_limits<double>::infinity()) {
      std::snprintf(buf, sizeof(buf), "%s = %g outside %s%g, inf)", key, v, lb, lo);
    } else {
      std::snprintf(buf, sizeof(buf), "%s = %g outside %s%g, %g]", key, v, lb, lo, hi);
    }
    issues.push_back(buf);
  }
}

void validate(const ExperimentConfig& c, std::vector<std::string>& issues) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  check_range(issues, "source.pair_rate_per_watt", c.pair_rate_per_watt.value, 0, inf);
  if (c.pair_rate_per_watt.err < 0)
    issues.push_back("source.pair_rate_per_watt uncertainty is negative");
  if (c.saturation_power_w)
    check_range(issues, "source.saturation_power_w", *c.saturation_power_w, 0, inf, true);
  check_range(issues, "source.pump_power_w", c.pump_power_w, 0, inf);
  check_range(issues, "source.bandwidth_fwhm_nm", c.bandwidth_fwhm_nm, 0, inf, true);
  check_range(issues, "source.center_wavelength_nm", c.center_wavelength_nm, 0, inf, true);
  check_range(issues, "source.pump_linewidth_fwhm_hz", c.pump_linewidth_fwhm_hz, 0, inf, true);
  if (!c.focal_integral_per_m && !c.waist_radius_um)
    issues.push_back("beam: need beam.focal_integral_per_m or beam.waist_radius_um");
  if (c.focal_integral_per_m)
    check_range(issues, "beam.focal_integral_per_m", *c.focal_integral_per_m, 0, inf, true);
  if (c.waist_radius_um)
    check_range(issues, "beam.waist_radius_um", *c.waist_radius_um, 0, inf, true);
  check_range(issues, "cell.length_mm", c.cell_length_mm, 0, inf, true);
  check_range(issues, "cell.concentration_mmol_per_l", c.concentration_mmol_per_l, 0, inf);
  check_range(issues, "cell.sigma2_gm", c.sigma2_gm.value, 0, inf);
  if (c.sigma2_gm.err < 0) issues.push_back("cell.sigma2_gm uncertainty is negative");
  check_range(issues, "cell.fluorescence_yield", c.fluorescence_yield, 0, 1);
  check_range(issues, "collection.eta_col", c.eta_col.value, 0, 1);
  if (c.eta_col.err < 0) issues.push_back("collection.eta_col uncertainty is negative");
  check_range(issues, "collection.eta_det", c.eta_det, 0, 1);
  check_range(issues, "detector_a.efficiency", c.detector_a.efficiency, 0, 1);
  check_range(issues, "detector_a.dead_time_ns", c.detector_a.dead_time * 1e9, 0, inf);
  check_range(issues, "detector_a.dark_rate_hz", c.detector_a.dark_rate, 0, inf);
  check_range(issues, "detector_b.efficiency", c.detector_b.efficiency, 0, 1);
  check_range(issues, "detector_b.dead_time_ns", c.detector_b.dead_time * 1e9, 0, inf);
  check_range(issues, "detector_b.dark_rate_hz", c.detector_b.dark_rate, 0, inf);
  check_range(issues, "splitter.ratio", c.splitter_ratio, 0, 1);
  check_range(issues, "splitter.pre_transmission", c.pre_split_transmission, 0, 1);
  check_range(issues, "coincidence.window_ns", c.coincidence_window_ns, 0, inf, true);
  check_range(issues, "threshold.dark_rate_hz", c.threshold_dark_rate_hz, 0, inf);
  check_range(issues, "threshold.duration_s", c.threshold_duration_s, 0, inf, true);
  if (c.measured_threshold_hz) {
    check_range(issues, "threshold.measured_rate_hz", c.measured_threshold_hz->value, 0, inf);
    if (c.measured_threshold_hz->err < 0)
      issues.push_back("threshold.measured_rate_hz uncertainty is negative");
  }
}

ExperimentConfig parse_config_text(std::istream& in) {
  const auto table = key_table();
  ExperimentConfig cfg;
  std::vector<std::string> issues;
  std::set<std::string> seen;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back(fmt_line(line_no, "expected key = value"));
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value_text = trim(line.substr(eq + 1));

    auto it = table.find(key);
    if (it == table.end()) {
      issues.push_back(fmt_line(line_no, "unknown key '" + key + "'"));
      continue;
    }
    if (!seen.insert(key).second) {
      issues.push_back(fmt_line(line_no, "duplicate key '" + key + "'"));
      continue;
    }

    Uncertain u;
    bool ok = true;
    if (auto pm = value_text.find("+-"); pm != std::string::npos) {
      if (!it->second.accepts_err) {
        issues.push_back(fmt_line(line_no, "'" + key + "' does not take an uncertainty"));
        continue;
      }
      ok = parse_number(value_text.substr(0, pm), &u.value) &&
           parse_number(value_text.substr(pm + 2), &u.err);
    } else {
      ok = parse_number(value_text, &u.value);
    }
    if (!ok) {
      issues.push_back(fmt_line(line_no, "'" + key + "': cannot parse '" + value_text + "'"));
      continue;
    }
    it->second.apply(cfg, u);
  }

  for (const auto& [key, spec] : table) {
    if (spec.required && !seen.count(key))
      issues.push_back("missing required key '" + key + "'");
  }
  if (issues.empty()) validate(cfg, issues);
  if (!issues.empty()) throw validation_error(issues);
  return cfg;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file '" + path + "'");
  return parse_config_text(in);
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config_text(in);
}

SpdcSource ExperimentConfig::make_source() const {
  SpdcSource s;
  s.pair_rate_per_watt = pair_rate_per_watt.value;
  s.saturation_power = saturation_power_w;
  s.bandwidth = SpectralWidth{bandwidth_fwhm_nm * 1e-9, WidthRep::fwhm_wavelength,
                              center_wavelength_nm * 1e-9};
  s.center_wavelength = center_wavelength_nm * 1e-9;
  s.pump_linewidth_fwhm = pump_linewidth_fwhm_hz;
  return s;
}

SampleCell ExperimentConfig::make_cell() const {
  return make_sample_cell(cell_length_mm * 1e-3, concentration_mmol_per_l,
                          sigma2_gm.value, fluorescence_yield);
}

CollectionSetup ExperimentConfig::make_collection() const {
  return CollectionSetup{eta_col.value, eta_det};
}

std::optional<GaussianBeam> ExperimentConfig::make_beam() const {
  if (!waist_radius_um) return std::nullopt;
  return GaussianBeam{*waist_radius_um * 1e-6, center_wavelength_nm * 1e-9,
                      waist_position_mm * 1e-3};
}

double ExperimentConfig::focal() const {
  if (focal_integral_per_m) return *focal_integral_per_m;
  auto beam = make_beam();
  if (!beam) throw domain_error("no beam geometry or focal integral configured");
  return focal_integral(*beam, make_cell(), cell_center_offset_mm * 1e-3);
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto kv = [&out](const char* key, double v) { out << key << " = " << num(v) << "\n"; };
  auto kverr = [&out](const char* key, const Uncertain& u) {
    out << key << " = " << num(u.value);
    if (u.err != 0) out << " +- " << num(u.err);
    out << "\n";
  };
  kverr("source.pair_rate_per_watt", c.pair_rate_per_watt);
  if (c.saturation_power_w) kv("source.saturation_power_w", *c.saturation_power_w);
  kv("source.pump_power_w", c.pump_power_w);
  kv("source.bandwidth_fwhm_nm", c.bandwidth_fwhm_nm);
  kv("source.center_wavelength_nm", c.center_wavelength_nm);
  kv("source.pump_linewidth_fwhm_hz", c.pump_linewidth_fwhm_hz);
  if (c.focal_integral_per_m) kv("beam.focal_integral_per_m", *c.focal_integral_per_m);
  if (c.waist_radius_um) kv("beam.waist_radius_um", *c.waist_radius_um);
  kv("beam.waist_position_mm", c.waist_position_mm);
  kv("cell.length_mm", c.cell_length_mm);
  kv("cell.center_offset_mm", c.cell_center_offset_mm);
  kv("cell.concentration_mmol_per_l", c.concentration_mmol_per_l);
  kverr("cell.sigma2_gm", c.sigma2_gm);
  kv("cell.fluorescence_yield", c.fluorescence_yield);
  kverr("collection.eta_col", c.eta_col);
  kv("collection.eta_det", c.eta_det);
  kv("detector_a.efficiency", c.detector_a.efficiency);
  kv("detector_a.dead_time_ns", c.detector_a.dead_time * 1e9);
  kv("detector_a.dark_rate_hz", c.detector_a.dark_rate);
  kv("detector_b.efficiency", c.detector_b.efficiency);
  kv("detector_b.dead_time_ns", c.detector_b.dead_time * 1e9);
  kv("detector_b.dark_rate_hz", c.detector_b.dark_rate);
  kv("splitter.ratio", c.splitter_ratio);
  kv("splitter.pre_transmission", c.pre_split_transmission);
  kv("coincidence.window_ns", c.coincidence_window_ns);
  kv("threshold.dark_rate_hz", c.threshold_dark_rate_hz);
  kv("threshold.duration_s", c.threshold_duration_s);
  if (c.measured_threshold_hz) kverr("threshold.measured_rate_hz", *c.measured_threshold_hz);
  return out.str();
}

}  // namespace etpa::cli
