#pragma once

// Pointwise energy functionals shared by the stepper's recorders and the
// decay diagnostics.

#include <span>

#include "kdvsat/grid.hpp"
#include "kdvsat/norms.hpp"
#include "kdvsat/saturation.hpp"

namespace kdvsat {

/// E = sum_j y_j^2 dx, the squared discrete L2 norm.
inline double energy(std::span<const double> y, double dx) { return l2_norm_squared(y, dx); }

/// One-sided y_x(t, 0) ~ (y_2 - y_1) / dx.
inline double boundary_derivative(std::span<const double> y, double dx) {
  if (y.size() < 2) throw InvalidParameter("y", "needs at least two nodes");
  return (y[1] - y[0]) / dx;
}

/// sum_j sat(a y)_j y_j dx.
inline double control_work(std::span<const double> y, const DampingProfile& d,
                           const SaturationSpec& spec, double dx) {
  const auto f = feedback(y, d, spec, dx);
  return l2_dot(f, y, dx);
}

}  // namespace kdvsat
