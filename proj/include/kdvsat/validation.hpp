#pragma once

// Seeded randomized property suites for the saturation operators: sector
// condition, Lipschitz bounds, odd symmetry, range and dissipativity.
//
// Every trial draws from its own generator seeded by mix(seed, trial), so a
// failure is reproducible from the printed trial seed alone.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kdvsat/grid.hpp"
#include "kdvsat/norms.hpp"
#include "kdvsat/saturation.hpp"

namespace kdvsat {

struct ValidationOptions {
  std::uint64_t seed = 42;
  long trials = 10000;
  int nx = 200;
  // Fault injection, used to confirm the suites can fail.
  double sector_gain_scale = 1.0;           // multiplies k(r)
  std::optional<double> lipschitz_inflation;  // outputs scaled by inflation * bound
};

struct SuiteFailure {
  long trial = 0;
  std::uint64_t trial_seed = 0;
  std::string digest;  // FNV-1a of the input samples
  std::string detail;
};

struct SuiteResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  std::optional<SuiteFailure> first_failure;
  bool passed() const noexcept { return failures == 0; }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::string digest(std::span<const double> a, std::span<const double> b = {}) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::span<const double> v) {
    for (double x : v) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof x);
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
    }
  };
  feed(a);
  feed(b);
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

  std::vector<double> normal_vector(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = normal();
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

inline void scale_to(std::vector<double>& v, double current, double target) {
  if (current > 0.0)
    for (double& x : v) x *= target / current;
}

/// Random gain on a random sub-interval; a0 <= a_j <= a1 on omega, 0 outside.
inline DampingProfile random_profile(TrialRng& rng, const Grid& g) {
  DampingProfile d;
  double lo = rng.uniform(0.0, g.L);
  double hi = rng.uniform(0.0, g.L);
  if (lo > hi) std::swap(lo, hi);
  if (hi - lo < 2.0 * g.dx) {
    lo = 0.0;
    hi = g.L;
  }
  if (rng.chance(0.25)) {
    lo = 0.0;
    hi = g.L;
  }
  d.omega = {lo, hi};
  d.a0 = rng.log_uniform(0.05, 5.0);
  d.a1 = d.a0 * rng.uniform(1.0, 4.0);
  d.a_delta.assign(g.nodes(), 0.0);
  for (std::size_t i = 0; i < g.nodes(); ++i)
    if (g.x(i) >= lo && g.x(i) <= hi) d.a_delta[i] = rng.uniform(d.a0, d.a1);
  return d;
}

inline std::vector<double> scaled(std::vector<double> v, double factor) {
  for (double& x : v) x *= factor;
  return v;
}

inline std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

template <class Trial>
SuiteResult run_suite(const std::string& name, const ValidationOptions& opt, std::uint64_t salt,
                      Trial&& trial) {
  SuiteResult res;
  res.name = name;
  for (long t = 0; t < opt.trials; ++t) {
    const std::uint64_t ts = splitmix64(opt.seed ^ splitmix64(salt + static_cast<std::uint64_t>(t)));
    TrialRng rng(ts);
    std::string dig, why;
    ++res.trials;
    if (!trial(rng, dig, why)) {
      ++res.failures;
      if (!res.first_failure) res.first_failure = SuiteFailure{t, ts, dig, why};
    }
  }
  return res;
}

}  // namespace detail

/// (sat(a v) - k(r) a v) v >= -tol at every node for admissible v.
inline SuiteResult sector_suite(SatKind kind, const ValidationOptions& opt) {
  const Grid g = build_grid(2.0 * std::numbers::pi, opt.nx, 1.0, 1);
  const std::string name = std::string("sector_") + to_string(kind);
  return detail::run_suite(name, opt, kind == SatKind::l2 ? 11 : 12,
                           [&](detail::TrialRng& rng, std::string& dig, std::string& why) {
    const DampingProfile d = detail::random_profile(rng, g);
    const SaturationSpec spec{kind, rng.log_uniform(0.01, 10.0)};
    const double r = rng.log_uniform(0.01, 100.0);
    auto v = rng.normal_vector(g.nodes());
    const double frac = rng.chance(0.1) ? 1.0 - 1e-12 : rng.uniform(0.0, 1.0);
    const double norm = kind == SatKind::l2 ? l2_norm(v, g.dx) : sup_norm(v);
    detail::scale_to(v, norm, frac * r);
    dig = detail::digest(v, d.a_delta);
    const auto rep = check_sector(v, d, spec, r, g.dx, opt.sector_gain_scale);
    if (!rep.ok()) {
      why = detail::fmt("node %.0f product %.3e", static_cast<double>(rep.violations[0].node),
                        rep.violations[0].product);
      return false;
    }
    return true;
  });
}

/// |M(s) - M(s~)|_2 <= bound |s - s~|_2, M = sat_l2 or sat_loc.
inline SuiteResult lipschitz_suite(SatKind kind, double bound, const ValidationOptions& opt) {
  const Grid g = build_grid(2.0 * std::numbers::pi, opt.nx, 1.0, 1);
  const std::string name =
      std::string("lipschitz_") + to_string(kind) + "_" + detail::fmt("%g", bound, 0.0);
  const double inflate = opt.lipschitz_inflation ? *opt.lipschitz_inflation * bound : 1.0;
  return detail::run_suite(name, opt, kind == SatKind::l2 ? 21 : 22,
                           [&](detail::TrialRng& rng, std::string& dig, std::string& why) {
    const double u0 = rng.log_uniform(0.01, 10.0);
    auto s = rng.normal_vector(g.nodes());
    detail::scale_to(s, l2_norm(s, g.dx), rng.log_uniform(1e-3, 10.0) * u0);
    auto delta = rng.normal_vector(g.nodes());
    detail::scale_to(delta, l2_norm(delta, g.dx), rng.log_uniform(1e-6, 10.0) * u0);
    std::vector<double> s2(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) s2[j] = s[j] + delta[j];
    auto apply_sat = [&](std::span<const double> v) {
      auto out = kind == SatKind::l2 ? sat_l2(v, u0, g.dx) : sat_loc(v, u0);
      return detail::scaled(std::move(out), inflate);
    };
    const auto m1 = apply_sat(s);
    const auto m2 = apply_sat(s2);
    std::vector<double> dm(s.size()), ds(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      dm[j] = m1[j] - m2[j];
      ds[j] = s[j] - s2[j];
    }
    const double lhs = l2_norm(dm, g.dx);
    const double rhs = bound * l2_norm(ds, g.dx);
    dig = detail::digest(s, s2);
    if (lhs > rhs * (1.0 + 1e-12)) {
      why = detail::fmt("ratio %.6f exceeds bound %.3f", lhs / l2_norm(ds, g.dx), bound);
      return false;
    }
    return true;
  });
}

/// sat(-v) == -sat(v) exactly, plus the range bounds of each saturation.
inline SuiteResult symmetry_range_suite(SatKind kind, const ValidationOptions& opt) {
  const Grid g = build_grid(2.0 * std::numbers::pi, opt.nx, 1.0, 1);
  return detail::run_suite(std::string("odd_range_") + to_string(kind), opt,
                           kind == SatKind::l2 ? 31 : 32,
                           [&](detail::TrialRng& rng, std::string& dig, std::string& why) {
    const double u0 = rng.log_uniform(0.01, 10.0);
    auto v = rng.normal_vector(g.nodes());
    detail::scale_to(v, l2_norm(v, g.dx), rng.log_uniform(1e-3, 10.0) * u0);
    dig = detail::digest(v);
    const auto f = kind == SatKind::l2 ? sat_l2(v, u0, g.dx) : sat_loc(v, u0);
    const auto fm = kind == SatKind::l2 ? sat_l2(detail::scaled(v, -1.0), u0, g.dx)
                                        : sat_loc(detail::scaled(v, -1.0), u0);
    for (std::size_t j = 0; j < v.size(); ++j)
      if (fm[j] != -f[j]) {
        why = "odd symmetry broken";
        return false;
      }
    if (kind == SatKind::l2 && l2_norm(f, g.dx) > u0 * (1.0 + 1e-12)) {
      why = detail::fmt("L2 norm %.6e above level %.6e", l2_norm(f, g.dx), u0);
      return false;
    }
    if (kind == SatKind::localized && sup_norm(f) > u0) {
      why = detail::fmt("sup norm %.6e above level %.6e", sup_norm(f), u0);
      return false;
    }
    return true;
  });
}

/// sum_j feedback(v)_j v_j dx >= 0.
inline SuiteResult dissipativity_suite(SatKind kind, const ValidationOptions& opt) {
  const Grid g = build_grid(2.0 * std::numbers::pi, opt.nx, 1.0, 1);
  return detail::run_suite(std::string("dissipative_") + to_string(kind), opt,
                           40 + static_cast<std::uint64_t>(kind),
                           [&](detail::TrialRng& rng, std::string& dig, std::string& why) {
    const DampingProfile d = detail::random_profile(rng, g);
    const SaturationSpec spec{kind, rng.log_uniform(0.01, 10.0)};
    auto v = rng.normal_vector(g.nodes());
    detail::scale_to(v, l2_norm(v, g.dx), rng.log_uniform(1e-3, 100.0));
    dig = detail::digest(v, d.a_delta);
    const auto f = feedback(v, d, spec, g.dx);
    const double work = l2_dot(f, v, g.dx);
    if (work < 0.0) {
      why = detail::fmt("control work %.3e, norm %.3e", work, l2_norm(v, g.dx));
      return false;
    }
    return true;
  });
}

/// Every suite run by `validate`.
inline std::vector<SuiteResult> run_validation(const ValidationOptions& opt) {
  std::vector<SuiteResult> out;
  out.push_back(sector_suite(SatKind::l2, opt));
  out.push_back(sector_suite(SatKind::localized, opt));
  out.push_back(lipschitz_suite(SatKind::l2, 3.0, opt));
  out.push_back(lipschitz_suite(SatKind::l2, 1.0, opt));
  out.push_back(lipschitz_suite(SatKind::localized, 1.0, opt));
  out.push_back(symmetry_range_suite(SatKind::l2, opt));
  out.push_back(symmetry_range_suite(SatKind::localized, opt));
  for (SatKind k : {SatKind::none, SatKind::localized, SatKind::l2})
    out.push_back(dissipativity_suite(k, opt));
  return out;
}

}  // namespace kdvsat
