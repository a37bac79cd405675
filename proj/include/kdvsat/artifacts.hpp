#pragma once

// Run summaries and the on-disk artifacts of a simulation:
// energy.csv, snapshots.csv, config.echo, report.txt (+ optional plot.gp).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "kdvsat/config.hpp"
#include "kdvsat/diagnostics.hpp"
#include "kdvsat/stepper.hpp"

namespace kdvsat {

/// Guaranteed norm decay rate for the configuration, when one is known:
/// the full-domain L2-saturated loop (rate mu with r = |y0|) and the
/// full-domain unsaturated loop (rate a0).
inline std::optional<double> theoretical_rate(const ScenarioConfig& c, double initial_norm) {
  if (!c.control) return std::nullopt;
  const bool full = c.omega.lo <= 0.0 && c.omega.hi >= c.L * (1.0 - 1e-15);
  if (!full) return std::nullopt;
  if (c.sat.kind == SatKind::none) return c.a0;
  if (c.sat.kind == SatKind::l2 && initial_norm > 0.0)
    return mu_theoretical(c.a0, c.a0, c.sat.u0, initial_norm);
  return std::nullopt;
}

struct RunSummary {
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();
  double tail_rate = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> mu;
  std::size_t envelope_violations = 0;
  double max_overshoot = std::numeric_limits<double>::quiet_NaN();
  double max_relative_increase = 0.0;  // worst (E_{i+1} - E_i) / E_i
  double budget_max = 0.0;
  double budget_drift = 0.0;
  double stationary_drift = 0.0;
};

inline RunSummary summarize(const RunResult& r) {
  RunSummary s;
  const auto trace = energy_trace(r);
  s.initial_energy = r.energies.front();
  s.final_energy = r.energies.back();
  s.mu = theoretical_rate(r.config, std::sqrt(s.initial_energy));
  const auto rep = decay_report(trace, s.mu.value_or(0.0));
  s.fitted_rate = rep.mu_fitted;
  s.tail_rate = rep.mu_tail;
  if (s.mu) {
    s.envelope_violations = rep.envelope_violations;
    s.max_overshoot = rep.max_overshoot;
  }
  s.max_relative_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < r.energies.size(); ++i)
    if (r.energies[i - 1] > 0.0)
      s.max_relative_increase =
          std::max(s.max_relative_increase, (r.energies[i] - r.energies[i - 1]) / r.energies[i - 1]);
  if (!std::isfinite(s.max_relative_increase)) s.max_relative_increase = 0.0;
  const auto budget = energy_budget_residual(r);
  s.budget_max = budget.max_abs;
  s.budget_drift = budget.cumulative_drift;
  s.stationary_drift = stationary_drift(r);
  return s;
}

inline std::string summary_line(const RunSummary& s) {
  std::ostringstream os;
  os << "final_energy=" << format_number(s.final_energy)
     << " fitted_rate=" << format_number(s.fitted_rate)
     << " mu_theory=" << (s.mu ? format_number(*s.mu) : std::string("n/a"))
     << " envelope_violations=" << s.envelope_violations;
  return os.str();
}

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw DataError("write failed for '" + p.string() + "'");
}

}  // namespace detail

inline std::string energy_csv(const RunResult& r, const RunSummary& s) {
  std::ostringstream os;
  os << "t,energy,envelope,boundary_flux,control_work\n";
  const double e0 = r.energies.front();
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double env = s.mu ? envelope(e0, *s.mu, r.times[i])
                            : std::numeric_limits<double>::quiet_NaN();
    os << format_number(r.times[i]) << ',' << format_number(r.energies[i]) << ','
       << format_number(env) << ',' << format_number(r.boundary_flux[i]) << ','
       << format_number(r.control_work[i]) << '\n';
  }
  return os.str();
}

inline std::string snapshots_csv(const RunResult& r) {
  std::ostringstream os;
  os << "t,x,y\n";
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    const std::string t = format_number(r.snapshot_times[k]);
    for (std::size_t i = 0; i < r.snapshots[k].size(); ++i)
      os << t << ',' << format_number(r.grid.x(i)) << ',' << format_number(r.snapshots[k][i])
         << '\n';
  }
  return os.str();
}

inline std::string report_text(const RunResult& r, const RunSummary& s) {
  std::ostringstream os;
  const auto& c = r.config;
  os << "scenario\n"
     << "  L = " << format_number(c.L) << ", nx = " << c.nx << ", dx = " << format_number(r.grid.dx)
     << "\n  t_final = " << format_number(c.t_final) << ", nt = " << c.nt
     << ", dt = " << format_number(r.grid.dt) << "\n  saturation = " << to_string(c.sat.kind)
     << ", u0 = " << format_number(c.sat.u0) << ", a0 = " << format_number(c.a0)
     << ", omega = [" << format_number(c.omega.lo) << ", " << format_number(c.omega.hi) << "]"
     << "\n  control = " << (c.control ? "on" : "off")
     << ", linearized = " << (c.linearized ? "yes" : "no") << ", n_iter = " << c.n_iter << "\n"
     << "energy\n"
     << "  initial = " << format_number(s.initial_energy)
     << "\n  initial_norm = " << format_number(std::sqrt(s.initial_energy))
     << "\n  final = " << format_number(s.final_energy)
     << "\n  max_relative_increase = " << format_number(s.max_relative_increase) << "\n"
     << "decay\n"
     << "  fitted_rate = " << format_number(s.fitted_rate)
     << "\n  tail_rate = " << format_number(s.tail_rate)
     << "\n  mu_theory = " << (s.mu ? format_number(*s.mu) : std::string("n/a"));
  if (s.mu)
    os << "\n  envelope_violations = " << s.envelope_violations
       << "\n  max_overshoot = " << format_number(s.max_overshoot);
  os << "\nbudget\n"
     << "  max_abs_residual = " << format_number(s.budget_max)
     << "\n  cumulative_drift = " << format_number(s.budget_drift) << "\n"
     << "drift\n"
     << "  sup_norm_drift = " << format_number(s.stationary_drift) << "\n";
  return os.str();
}

inline std::string gnuplot_script() {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel 't'\n"
         "set ylabel 'energy'\n"
         "set logscale y\n"
         "plot 'energy.csv' using 1:2 with lines, '' using 1:3 with lines dashtype 2\n"
         "pause -1\n"
         "unset logscale y\n"
         "set xlabel 'x'\n"
         "set ylabel 't'\n"
         "set zlabel 'y'\n"
         "splot 'snapshots.csv' using 2:1:3 with points pointtype 7 pointsize 0.2\n"
         "pause -1\n";
}

/// Writes all artifacts; report.txt goes last via a rename so that it only
/// exists when every other file is complete.
inline void write_artifacts(const std::filesystem::path& dir, const RunResult& r,
                            const RunSummary& s, bool gnuplot) {
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "report.txt");
  detail::write_file(dir / "config.echo", emit_config(r.config));
  detail::write_file(dir / "energy.csv", energy_csv(r, s));
  detail::write_file(dir / "snapshots.csv", snapshots_csv(r));
  if (gnuplot) detail::write_file(dir / "plot.gp", gnuplot_script());
  detail::write_file(dir / "report.txt.tmp", report_text(r, s));
  std::filesystem::rename(dir / "report.txt.tmp", dir / "report.txt");
}

inline void write_operator_dumps(const std::filesystem::path& dir, const OperatorSet& ops) {
  std::filesystem::create_directories(dir);
  auto dump = [&](const char* name, const Banded& m) {
    std::ostringstream os;
    write_dense_csv(os, m);
    detail::write_file(dir / name, os.str());
  };
  dump("d_minus.csv", ops.d_minus);
  dump("d_plus.csv", ops.d_plus);
  dump("d.csv", ops.d);
  dump("a_mat.csv", ops.a_mat);
  dump("c_mat.csv", ops.c_mat);
}

}  // namespace kdvsat
