#pragma once

// Energy traces, theoretical decay envelopes, fitted decay rates and the
// discrete energy budget of a run.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kdvsat/energy.hpp"
#include "kdvsat/error.hpp"
#include "kdvsat/stepper.hpp"

namespace kdvsat {

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> boundary_flux;
  std::vector<double> control_work;
};

inline EnergyTrace energy_trace(const RunResult& r) {
  return {r.times, r.energies, r.boundary_flux, r.control_work};
}

/// mu = min{a0, u0 a0 / (r a1)}, the guaranteed norm decay rate for the
/// full-domain L2-saturated loop started inside the ball of radius r.
inline double mu_theoretical(double a0, double a1, double u0, double r) {
  if (!(a0 > 0.0)) throw InvalidParameter("a0", "must be > 0");
  if (!(a1 > 0.0)) throw InvalidParameter("a1", "must be > 0");
  if (!(u0 > 0.0)) throw InvalidParameter("u0", "must be > 0");
  if (!(r > 0.0)) throw InvalidParameter("r", "must be > 0");
  return std::min(a0, u0 * a0 / (r * a1));
}

/// Squared-norm envelope E0 exp(-2 mu t).
inline double envelope(double e0, double mu, double t) {
  if (e0 < 0.0) throw InvalidParameter("E0", "must be >= 0");
  if (mu < 0.0) throw InvalidParameter("mu", "must be >= 0");
  return e0 * std::exp(-2.0 * mu * t);
}

/// Least-squares decay rate of the norm, -slope / 2 of ln E against t, over
/// the trailing `window` fraction of the samples (1 = whole trace).
inline double fit_decay_rate(const EnergyTrace& trace, double window = 1.0) {
  if (!(window > 0.0 && window <= 1.0)) throw InvalidParameter("window", "must be in (0, 1]");
  const std::size_t n = std::min(trace.times.size(), trace.energies.size());
  const auto start = static_cast<std::size_t>(std::floor((1.0 - window) * static_cast<double>(n)));
  if (n - start < 3) throw FitDomainError("decay fit needs at least 3 samples in its window");
  double st = 0.0, sy = 0.0;
  const double m = static_cast<double>(n - start);
  for (std::size_t i = start; i < n; ++i) {
    const double e = trace.energies[i];
    if (!(e > 0.0) || !std::isfinite(e))
      throw FitDomainError("non-positive energy at sample " + std::to_string(i));
    st += trace.times[i];
    sy += std::log(e);
  }
  const double tbar = st / m, ybar = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double dt = trace.times[i] - tbar;
    sxx += dt * dt;
    sxy += dt * (std::log(trace.energies[i]) - ybar);
  }
  if (!(sxx > 0.0)) throw FitDomainError("decay fit window has no time spread");
  return -0.5 * (sxy / sxx);
}

struct DecayReport {
  double mu_formula = 0.0;
  double mu_fitted = std::numeric_limits<double>::quiet_NaN();  // whole trace
  double mu_tail = std::numeric_limits<double>::quiet_NaN();    // trailing half
  std::size_t envelope_violations = 0;
  double max_overshoot = 0.0;  // max over t of E(t) / envelope(t)
};

/// Compares a trace against E(0) exp(-2 mu t) with relative slack.
inline DecayReport decay_report(const EnergyTrace& trace, double mu, double slack = 1e-6) {
  DecayReport rep;
  rep.mu_formula = mu;
  try {
    rep.mu_fitted = fit_decay_rate(trace);
  } catch (const FitDomainError&) {
  }
  try {
    rep.mu_tail = fit_decay_rate(trace, 0.5);
  } catch (const FitDomainError&) {
  }
  if (trace.energies.empty()) return rep;
  const double e0 = trace.energies.front();
  for (std::size_t i = 0; i < trace.energies.size(); ++i) {
    const double env = envelope(e0, mu, trace.times[i]);
    const double e = trace.energies[i];
    if (e > env * (1.0 + slack)) ++rep.envelope_violations;
    if (env > 0.0) rep.max_overshoot = std::max(rep.max_overshoot, e / env);
  }
  return rep;
}

struct BudgetReport {
  std::vector<double> residuals;
  double max_abs = 0.0;
  double cumulative_drift = 0.0;
};

/// r_i = E_{i+1} - E_i + h_i |y_x(t_{i+1}, 0)|^2 + 2 h_i W_{i+1}, with
/// h_i = t_{i+1} - t_i and W the control work; flux and work are taken at the
/// new time level as in the implicit scheme.
inline BudgetReport energy_budget_residual(const RunResult& result) {
  BudgetReport rep;
  const auto& t = result.times;
  const auto& e = result.energies;
  if (t.size() != e.size() || t.size() != result.boundary_flux.size() ||
      t.size() != result.control_work.size())
    throw InvalidParameter("result", "traces are not aligned");
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    const double r = e[i + 1] - e[i] + h * result.boundary_flux[i + 1] +
                     2.0 * h * result.control_work[i + 1];
    rep.residuals.push_back(r);
    rep.max_abs = std::max(rep.max_abs, std::abs(r));
    rep.cumulative_drift += r;
  }
  return rep;
}

/// Sup-norm distance between the final and the initial state.
inline double stationary_drift(const RunResult& result) {
  return sup_distance(result.final_state.values, result.initial.values);
}

}  // namespace kdvsat
