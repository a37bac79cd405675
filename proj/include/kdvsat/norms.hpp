#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace kdvsat {

// Discrete L2 inner product with rectangle weights dx. Every module that needs
// an L2 quantity (energy, sat_l2, control work) goes through these.
inline double l2_dot(std::span<const double> u, std::span<const double> v,
                     double dx) {
  double acc = 0.0;
  const std::size_t n = std::min(u.size(), v.size());
  for (std::size_t j = 0; j < n; ++j) acc += u[j] * v[j];
  return acc * dx;
}

inline double l2_norm_squared(std::span<const double> v, double dx) {
  return l2_dot(v, v, dx);
}

inline double l2_norm(std::span<const double> v, double dx) {
  return std::sqrt(l2_norm_squared(v, dx));
}

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double sup_distance(std::span<const double> u,
                           std::span<const double> v) {
  double m = 0.0;
  const std::size_t n = std::min(u.size(), v.size());
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(u[j] - v[j]));
  return m;
}

}  // namespace kdvsat
