#pragma once

// Scalar, localized and L2 saturations, the saturated feedback term and the
// sector-condition quantities used in the stability analysis.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "kdvsat/error.hpp"
#include "kdvsat/grid.hpp"
#include "kdvsat/norms.hpp"

namespace kdvsat {

enum class SatKind { none, localized, l2 };

inline std::string to_string(SatKind k) {
  switch (k) {
    case SatKind::none: return "none";
    case SatKind::localized: return "loc";
    case SatKind::l2: return "l2";
  }
  return "none";
}

inline SatKind sat_kind_from_string(const std::string& s) {
  if (s == "none") return SatKind::none;
  if (s == "loc" || s == "localized") return SatKind::localized;
  if (s == "l2") return SatKind::l2;
  throw InvalidParameter("sat_kind", "expected none|loc|l2, got '" + s + "'");
}

struct SaturationSpec {
  SatKind kind = SatKind::none;
  double u0 = 1.0;

  bool operator==(const SaturationSpec&) const = default;

  void validate() const {
    if (kind != SatKind::none && !(u0 > 0.0))
      throw InvalidParameter("u0", "saturation level must be > 0");
  }
};

inline double sat_scalar(double s, double u0) { return std::clamp(s, -u0, u0); }

inline std::vector<double> sat_loc(std::span<const double> v, double u0) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = sat_scalar(v[j], u0);
  return out;
}

/// Rescales v onto the discrete L2 ball of radius u0 when it lies outside.
inline std::vector<double> sat_l2(std::span<const double> v, double u0, double dx) {
  std::vector<double> out(v.begin(), v.end());
  const double norm = l2_norm(v, dx);
  if (norm > u0) {
    const double scale = u0 / norm;
    for (double& x : out) x *= scale;
  }
  return out;
}

/// sat(a_delta * v) for the chosen kind; kind none is the unsaturated a*v.
inline std::vector<double> feedback(std::span<const double> v, const DampingProfile& d,
                                    const SaturationSpec& spec, double dx) {
  if (v.size() != d.a_delta.size())
    throw InvalidParameter("v", "length does not match damping profile");
  std::vector<double> av(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) av[j] = d.a_delta[j] * v[j];
  switch (spec.kind) {
    case SatKind::none: return av;
    case SatKind::localized: return sat_loc(av, spec.u0);
    case SatKind::l2: return sat_l2(av, spec.u0, dx);
  }
  return av;
}

/// k(r) = min{u0 / (a1 r), 1}.
inline double sector_gain(double r, double u0, double a1) {
  if (!(r > 0.0)) throw InvalidParameter("r", "must be > 0");
  if (!(u0 > 0.0)) throw InvalidParameter("u0", "must be > 0");
  if (!(a1 > 0.0)) throw InvalidParameter("a1", "must be > 0");
  return std::min(u0 / (a1 * r), 1.0);
}

struct SectorViolation {
  std::size_t node = 0;
  double product = 0.0;  // (sat(a v) - k a v) v
};

struct SectorReport {
  double gain = 0.0;
  std::vector<SectorViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

inline constexpr double kSectorTolerance = 1e-12;

/// Checks (sat(a_j v_j) - k(r) a_j v_j) v_j >= -tol at every node.
///
/// gain_scale multiplies k(r); it exists only so that test suites can confirm
/// they detect a wrong gain.
inline SectorReport check_sector(std::span<const double> v, const DampingProfile& d,
                                 const SaturationSpec& spec, double r, double dx,
                                 double gain_scale = 1.0) {
  if (spec.kind == SatKind::none)
    throw InvalidParameter("sat_kind", "sector condition needs a saturation");
  if (spec.kind == SatKind::l2 && l2_norm(v, dx) > r)
    throw InvalidParameter("v", "L2 norm exceeds the radius r");
  if (spec.kind == SatKind::localized && sup_norm(v) > r)
    throw InvalidParameter("v", "sup norm exceeds the radius r");

  SectorReport report;
  report.gain = gain_scale * sector_gain(r, spec.u0, d.a1);
  const auto sat = feedback(v, d, spec, dx);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double product = (sat[j] - report.gain * d.a_delta[j] * v[j]) * v[j];
    if (product < -kSectorTolerance) report.violations.push_back({j, product});
  }
  return report;
}

}  // namespace kdvsat
