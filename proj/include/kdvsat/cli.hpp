#pragma once

// Command-line front end: `simulate`, `validate` and `sweep`.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 divergence,
// 3 validation failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kdvsat/artifacts.hpp"
#include "kdvsat/config.hpp"
#include "kdvsat/sweep.hpp"
#include "kdvsat/validation.hpp"

namespace kdvsat::cli {

enum Exit : int { kOk = 0, kUsage = 1, kDiverged = 2, kValidationFailed = 3 };

struct ScenarioFlags {
  std::string preset_name = "fig2";
  std::string config_path;
  std::optional<int> nx;
  std::optional<int> nt;
  std::optional<int> record_stride;

  void attach(CLI::App& app) {
    app.add_option("--preset", preset_name, "Scenario preset (fig1|fig2|fig7|fig8|stationary|free)")
        ->capture_default_str();
    app.add_option("--config", config_path, "Config file (key = value); overrides the preset");
    app.add_option("--nx", nx, "Number of space steps; overrides preset and config");
    app.add_option("--nt", nt, "Number of time steps; overrides preset and config");
    app.add_option("--record-stride", record_stride, "Record energy every N steps");
  }

  /// preset < config file < explicit flags
  ScenarioConfig resolve() const {
    ScenarioConfig c = preset(preset_name);
    if (!config_path.empty()) c = load_config(config_path, c);
    if (nx) c.nx = *nx;
    if (nt) c.nt = *nt;
    if (record_stride) c.record_stride = *record_stride;
    c.validate();
    return c;
  }
};

inline std::uint64_t seed_from_env_or(std::uint64_t fallback) {
  if (const char* env = std::getenv("KDV_SAT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw InvalidParameter("KDV_SAT_SEED", std::string("not an unsigned integer: ") + env);
    }
  }
  return fallback;
}

inline std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    values.push_back(detail::parse_double("values", item));
  }
  return values;
}

inline int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------

inline int cmd_simulate(const ScenarioFlags& flags, const std::string& out_dir, bool gnuplot,
                        bool dump_operators, std::ostream& out, std::ostream& err) {
  const ScenarioConfig cfg = flags.resolve();
  RunResult result;
  try {
    result = run(cfg);
  } catch (const DivergenceError& e) {
    err << "simulate: " << e.what() << '\n';
    return kDiverged;
  }
  const RunSummary summary = summarize(result);
  write_artifacts(out_dir, result, summary, gnuplot);
  if (dump_operators)
    write_operator_dumps(std::filesystem::path(out_dir) / "operators",
                         build_operator_set(result.grid));
  out << summary_line(summary) << '\n';
  return kOk;
}

inline int cmd_validate(const ValidationOptions& opt, std::ostream& out) {
  out << "seed = " << opt.seed << ", trials = " << opt.trials << ", nx = " << opt.nx << '\n';
  const auto results = run_validation(opt);
  long failed_suites = 0;
  for (const auto& r : results) {
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << (r.trials - r.failures) << '/'
        << r.trials << " passed";
    if (r.first_failure) {
      const auto& f = *r.first_failure;
      out << " (first failure: trial " << f.trial << ", trial_seed " << f.trial_seed
          << ", input digest " << f.digest << ", " << f.detail << ")";
      ++failed_suites;
    }
    out << '\n';
  }
  out << (results.size() - static_cast<std::size_t>(failed_suites)) << " suites passed, "
      << failed_suites << " failed (seed " << opt.seed << ")\n";
  return failed_suites == 0 ? kOk : kValidationFailed;
}

inline int cmd_sweep(const ScenarioFlags& flags, const std::string& axis_name,
                     const std::string& values_text, const std::string& out_dir, int jobs,
                     std::ostream& out, std::ostream& err) {
  const SweepAxis axis = sweep_axis_from_string(axis_name);
  const auto values = parse_value_list(values_text);
  if (values.empty()) {
    err << "sweep: --values needs at least one number\n";
    return kUsage;
  }
  const ScenarioConfig base = flags.resolve();
  for (double v : values) with_axis(base, axis, v).validate();

  const auto rows = run_sweep(base, axis, values, jobs);
  const std::string csv = sweep_csv(axis, rows);
  std::filesystem::create_directories(out_dir);
  detail::write_file(std::filesystem::path(out_dir) / "sweep.csv", csv);
  out << csv;

  int code = kOk;
  for (const auto& r : rows) {
    if (r.status == "diverged") {
      err << "sweep: " << to_string(axis) << " = " << format_number(r.value) << ": " << r.message << '\n';
      code = kDiverged;
    } else if (r.status != "ok" && code == kOk) {
      err << "sweep: " << to_string(axis) << " = " << format_number(r.value) << ": " << r.message << '\n';
      code = kUsage;
    }
  }
  return code;
}

// ---------------------------------------------------------------------------

/// Entry point; `args` excludes the program name.
inline int main(std::vector<std::string> args, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  CLI::App app{"Saturated-feedback KdV simulator", "kdvsat"};
  app.require_subcommand(1);

  ScenarioFlags sim_flags, sweep_flags;
  std::string sim_out, sweep_out;
  bool gnuplot = false, dump_operators = false;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its artifacts");
  sim_flags.attach(*simulate);
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_flag("--gnuplot", gnuplot, "Also write a gnuplot script");
  simulate->add_flag("--dump-operators", dump_operators,
                     "Write the assembled matrices as dense CSV under OUT/operators");

  ValidationOptions vopt;
  std::optional<std::uint64_t> seed;
  auto* validate = app.add_subcommand("validate", "Run the randomized saturation property suites");
  validate->add_option("--seed", seed, "64-bit seed (default: $KDV_SAT_SEED, else 42)");
  validate->add_option("--trials", vopt.trials, "Trials per suite")->capture_default_str()
      ->check(CLI::PositiveNumber);
  validate->add_option("--nx", vopt.nx, "Samples per random input minus one")->capture_default_str()
      ->check(CLI::Range(8, 1 << 20));
  double fault_gain = 1.0;
  std::optional<double> fault_lipschitz;
  validate->add_option("--fault-gain-scale", fault_gain)->group("");
  validate->add_option("--fault-lipschitz", fault_lipschitz)->group("");

  std::string axis, values_text;
  int jobs = default_jobs();
  auto* sweep = app.add_subcommand("sweep", "Run a scenario for several values of one parameter");
  sweep_flags.attach(*sweep);
  sweep->add_option("--axis", axis, "Swept parameter (u0|a0|nx)")->required();
  sweep->add_option("--values", values_text, "Comma-separated values")->required();
  sweep->add_option("--out", sweep_out, "Output directory for sweep.csv")->required();
  sweep->add_option("--jobs", jobs, "Concurrent runs")->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim_flags, sim_out, gnuplot, dump_operators, out, err);
    if (*validate) {
      vopt.seed = seed ? *seed : seed_from_env_or(42);
      vopt.sector_gain_scale = fault_gain;
      vopt.lipschitz_inflation = fault_lipschitz;
      return cmd_validate(vopt, out);
    }
    if (*sweep) return cmd_sweep(sweep_flags, axis, values_text, sweep_out, jobs, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return main(std::move(args));
}

}  // namespace kdvsat::cli
