#pragma once

// Implicit time stepping of the saturated closed-loop KdV system.
//
// Each step solves
//   C Y' = Y - dt/2 D[(Y')^2] - dt sat(a Y'),   C = I + dt A,
// by the Picard update J(k+1) = C^{-1}(Y - dt/2 D[J(k)^2] - dt sat(a J(k))),
// starting from J(1) = Y. Nodes 1, Nx and Nx+1 are pinned to zero; the solve
// imposes the pins on nodes 1 and Nx exactly (interior block of C) and every
// iterate is re-pinned.

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "kdvsat/energy.hpp"
#include "kdvsat/error.hpp"
#include "kdvsat/grid.hpp"
#include "kdvsat/norms.hpp"
#include "kdvsat/operators.hpp"
#include "kdvsat/saturation.hpp"

namespace kdvsat {

struct StateVector {
  std::vector<double> values;  // length Nx + 1
  long time_index = 0;
};

/// Zeroes nodes 1, Nx and Nx+1 (0-based 0, size-2, size-1).
inline void pin_boundary(std::span<double> y) {
  if (y.size() < 3) return;
  y[0] = 0.0;
  y[y.size() - 2] = 0.0;
  y[y.size() - 1] = 0.0;
}

inline bool boundary_pinned(std::span<const double> y) {
  return y.size() >= 3 && y[0] == 0.0 && y[y.size() - 2] == 0.0 && y[y.size() - 1] == 0.0;
}

struct ScenarioConfig {
  double L = 2.0 * std::numbers::pi;
  int nx = 200;
  double t_final = 6.0;
  int nt = 6000;
  InitialCondition initial = OneMinusCos{};
  double a0 = 1.0;
  Interval omega{0.0, 2.0 * std::numbers::pi};
  SaturationSpec sat{};
  int n_iter = 5;
  bool linearized = false;
  bool control = true;
  int record_stride = 1;
  int snapshot_stride = 0;  // 0 selects max(1, nt / 60)
  bool early_exit = false;

  bool operator==(const ScenarioConfig&) const = default;

  int effective_snapshot_stride() const {
    return snapshot_stride > 0 ? snapshot_stride : std::max(1, nt / 60);
  }

  Grid grid() const { return build_grid(L, nx, t_final, nt); }

  void validate() const {
    (void)grid();
    if (n_iter < 1) throw InvalidParameter("n_iter", "must be >= 1");
    if (record_stride < 1) throw InvalidParameter("record_stride", "must be >= 1");
    if (snapshot_stride < 0) throw InvalidParameter("snapshot_stride", "must be >= 0");
    if (!(a0 > 0.0)) throw InvalidParameter("a0", "must be > 0");
    if (!(omega.lo < omega.hi)) throw InvalidParameter("omega", "interval is empty");
    if (omega.lo < 0.0 || omega.hi > L * (1.0 + 1e-15))
      throw InvalidParameter("omega", "interval must lie in [0, L]");
    sat.validate();
  }
};

/// Sup-norm increments |J(k+1) - J(k)| of one step, in iterate order.
using IterationTrace = std::vector<double>;

inline constexpr double kEarlyExitRatio = 1e-12;

inline StateVector step(const StateVector& y, const OperatorSet& ops, const DampingProfile& d,
                        const SaturationSpec& spec, const ScenarioConfig& cfg,
                        IterationTrace* trace = nullptr) {
  const std::size_t n = ops.size();
  if (y.values.size() != n + 1)
    throw InvalidParameter("y", "state length must be Nx + 1");
  if (d.a_delta.size() != n + 1)
    throw InvalidParameter("damping", "profile length must be Nx + 1");
  if (cfg.n_iter < 1) throw InvalidParameter("n_iter", "must be >= 1");

  std::vector<double> base = y.values;
  pin_boundary(base);

  std::vector<double> current = base;
  std::vector<double> rhs(n);
  std::vector<double> squared(n);
  if (trace) trace->clear();

  for (int k = 1; k <= cfg.n_iter; ++k) {
    std::copy_n(base.begin(), n, rhs.begin());
    if (!cfg.linearized) {
      for (std::size_t j = 0; j < n; ++j) squared[j] = current[j] * current[j];
      const auto dsq = matvec(ops.d, std::span<const double>(squared));
      for (std::size_t j = 0; j < n; ++j) rhs[j] -= 0.5 * ops.dt * dsq[j];
    }
    if (cfg.control) {
      const auto f = feedback(current, d, spec, ops.dx);
      for (std::size_t j = 0; j < n; ++j) rhs[j] -= ops.dt * f[j];
    }
    solve_c_pinned_in_place(ops, rhs);

    std::vector<double> next(n + 1, 0.0);
    std::copy_n(rhs.begin(), n, next.begin());
    pin_boundary(next);
    for (double v : next)
      if (!std::isfinite(v)) throw DivergenceError(y.time_index, k);

    const double increment = sup_distance(next, current);
    if (trace) trace->push_back(increment);
    current = std::move(next);
    if (cfg.early_exit && increment <= kEarlyExitRatio * sup_norm(current)) break;
  }
  return {std::move(current), y.time_index + 1};
}

struct RunResult {
  ScenarioConfig config;
  Grid grid;
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> boundary_flux;  // |y_x(t, 0)|^2
  std::vector<double> control_work;   // sum sat(a y) y dx
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;
  StateVector initial;
  StateVector final_state;
};

/// Called with every new state, including the initial one.
using StepObserver = std::function<void(const StateVector&)>;

inline RunResult run(const ScenarioConfig& cfg, const StepObserver& observer = {}) {
  cfg.validate();
  RunResult result;
  result.config = cfg;
  result.grid = cfg.grid();
  const Grid& g = result.grid;
  const OperatorSet ops = build_operator_set(g);
  const DampingProfile damping = sample_damping(cfg.a0, cfg.omega, g);
  const int snap_stride = cfg.effective_snapshot_stride();

  StateVector state{sample_initial(cfg.initial, g), 0};
  result.initial = state;

  auto record = [&](const StateVector& s) {
    const double t = g.t(s.time_index);
    result.times.push_back(t);
    result.energies.push_back(energy(s.values, g.dx));
    const double yx = boundary_derivative(s.values, g.dx);
    result.boundary_flux.push_back(yx * yx);
    result.control_work.push_back(cfg.control ? control_work(s.values, damping, cfg.sat, g.dx)
                                              : 0.0);
  };
  auto snapshot = [&](const StateVector& s) {
    result.snapshot_times.push_back(g.t(s.time_index));
    result.snapshots.push_back(s.values);
  };

  record(state);
  snapshot(state);
  if (observer) observer(state);
  for (int i = 1; i <= g.nt; ++i) {
    state = step(state, ops, damping, cfg.sat, cfg);
    if (observer) observer(state);
    if (i % cfg.record_stride == 0 || i == g.nt) record(state);
    if (i % snap_stride == 0 || i == g.nt) snapshot(state);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace kdvsat
