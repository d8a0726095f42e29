#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "etpa/commands.hpp"
#include "etpa/errors.hpp"

namespace {

using namespace etpa;
using namespace etpa::cli;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw io_error("write failed for '" + path + "'");
}

// Report goes to stdout; --out gets the identical bytes.
void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) write_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ETPA experiment feasibility toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, plot_path, dump_path;
  std::optional<double> force_qef, threshold, fixed_exponent;
  double dark_rate = 0.0;
  std::uint64_t seed = 0;
  SweepKnob knob = SweepKnob::pump;
  double from = 0.0, to = 0.0, duration = 1.0;
  int points = 0;
  bool linear_spacing = false;

  auto* predict = app.add_subcommand("predict", "Source figures, QEF and TPA rate predictions");
  predict->add_option("--config", config_path, "experiment config")->required();
  predict->add_option("--out", out_path, "also write the report to this file");
  predict->add_option("--force-qef", force_qef, "override the computed QEF");
  predict->add_option("--dump-config", dump_path, "write the resolved config and continue");

  auto* bound = app.add_subcommand("bound", "Enhancement factor needed for detectability");
  bound->add_option("--config", config_path, "experiment config")->required();
  bound->add_option("--out", out_path, "also write the report to this file");
  bound->add_option("--threshold", threshold, "measured detection threshold, counts/s");

  auto* fit = app.add_subcommand("fit", "Power-law fit and scaling classification of a CSV");
  fit->add_option("csv", csv_path, "measurement CSV (# schema=1)")->required();
  fit->add_option("--out", out_path, "also write the report to this file");
  fit->add_option("--fixed-exponent", fixed_exponent, "pin the exponent, fit amplitude only");
  fit->add_option("--dark", dark_rate, "dark rate to subtract, counts/s");
  fit->add_option("--plot", plot_path, "write plot data (data, fit, reference slopes) here");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coincidence sweep to CSV");
  simulate->add_option("--config", config_path, "experiment config")->required();
  simulate->add_option("--out", out_path, "write the CSV here instead of stdout");
  simulate
      ->add_option("--knob", knob, "sweep variable")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, SweepKnob>{{"pump", SweepKnob::pump},
                                           {"attenuation", SweepKnob::attenuation}}))
      ->required();
  simulate->add_option("--from", from, "first sweep value (W or transmission)")->required();
  simulate->add_option("--to", to, "last sweep value")->required();
  simulate->add_option("--points", points, "number of sweep points")->required();
  simulate->add_flag("--linear", linear_spacing, "linear spacing (default log)");
  simulate->add_option("--duration", duration, "seconds per point");
  simulate->add_option("--seed", seed, "RNG seed");

  auto* klyshko = app.add_subcommand("klyshko", "Calibration-free pair-rate bound from a scan");
  klyshko->add_option("csv", csv_path, "coincidence scan CSV")->required();
  klyshko->add_option("--config", config_path, "experiment config")->required();
  klyshko->add_option("--out", out_path, "also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are validation failures
  }

  try {
    if (*predict) {
      PredictOptions opts{load_config(config_path), force_qef};
      if (!dump_path.empty()) write_file(dump_path, dump_config(opts.cfg));
      emit(run_predict(opts), out_path);
    } else if (*bound) {
      emit(run_bound(BoundOptions{load_config(config_path), threshold}), out_path);
    } else if (*fit) {
      FitOptions opts{read_measurements(csv_path), fixed_exponent, dark_rate};
      FitOutput result = run_fit(opts);
      emit(result.report, out_path);
      if (!plot_path.empty()) write_file(plot_path, result.plot_csv);
    } else if (*simulate) {
      SimulateOptions opts{load_config(config_path), knob,  from,
                           to,                      points, linear_spacing,
                           duration,                seed};
      const std::string csv = run_simulate(opts);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        write_file(out_path, csv);
      }
    } else if (*klyshko) {
      emit(run_klyshko(KlyshkoOptions{load_config(config_path), read_measurements(csv_path)}),
           out_path);
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
