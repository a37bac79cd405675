#pragma once

// Uniform space/time discretization, initial data and damping sampling.
//
// Nodes are 1-based in the mathematical description, x_j = (j-1)*dx for
// j = 1..Nx+1; in code they are 0-based, x[i] = i*dx for i = 0..Nx.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "kdvsat/error.hpp"

namespace kdvsat {

struct Grid {
  double L = 0.0;
  int nx = 0;
  int nt = 0;
  double t_final = 0.0;
  double dx = 0.0;
  double dt = 0.0;

  /// Number of nodes, Nx + 1.
  std::size_t nodes() const noexcept { return static_cast<std::size_t>(nx) + 1; }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx; }
  double t(long step) const noexcept { return static_cast<double>(step) * dt; }
};

inline Grid build_grid(double L, int nx, double t_final, int nt) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidParameter("L", "must be > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final))
    throw InvalidParameter("t_final", "must be > 0");
  if (nx < 8) throw InvalidParameter("nx", "must be >= 8");
  if (nt < 1) throw InvalidParameter("nt", "must be >= 1");
  Grid g;
  g.L = L;
  g.nx = nx;
  g.nt = nt;
  g.t_final = t_final;
  g.dx = L / nx;
  g.dt = t_final / nt;
  return g;
}

// ---------------------------------------------------------------------------
// Initial conditions

struct OneMinusCos {
  bool operator==(const OneMinusCos&) const = default;
};

/// amplitude * exp(-((x - center) / width)^2)
struct Gaussian {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  bool operator==(const Gaussian&) const = default;
};

/// Two-column CSV `x,y`, optional header, strictly increasing x.
struct Tabulated {
  std::string path;
  bool operator==(const Tabulated&) const = default;
};

using InitialCondition = std::variant<OneMinusCos, Gaussian, Tabulated>;

/// Piecewise-linear table loaded from a tabulated initial-condition file.
class Table {
 public:
  Table(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size())
      throw DataError("table needs at least two (x, y) rows");
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i] > xs_[i - 1]))
        throw DataError("table x values must be strictly increasing");
  }

  double front() const { return xs_.front(); }
  double back() const { return xs_.back(); }

  double operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return (1.0 - w) * ys_[lo] + w * ys_[hi];
  }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

inline Table load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tabulated initial data '" + path + "'");
  std::vector<double> xs, ys;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      first = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError("malformed row in '" + path + "': " + line);
    try {
      const double x = std::stod(line.substr(0, comma));
      const double y = std::stod(line.substr(comma + 1));
      xs.push_back(x);
      ys.push_back(y);
    } catch (const std::logic_error&) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw DataError("malformed row in '" + path + "': " + line);
    }
    first = false;
  }
  return Table(std::move(xs), std::move(ys));
}

// ---------------------------------------------------------------------------
// Quadrature

namespace detail {

inline constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

template <class F>
double gauss_legendre5(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t q = 0; q < 5; ++q)
    acc += kGaussWeights[q] * f(mid + half * kGaussNodes[q]);
  return acc * half;
}

/// Cell [x_i - dx/2, x_i + dx/2] clamped to [0, L].
inline std::pair<double, double> cell(const Grid& g, std::size_t i) {
  const double xi = g.x(i);
  return {std::max(0.0, xi - 0.5 * g.dx), std::min(g.L, xi + 0.5 * g.dx)};
}

}  // namespace detail

/// Cell average of a function at every node; end half-cells are averaged over
/// their clamped length.
template <class F>
std::vector<double> cell_averages(F&& f, const Grid& g) {
  std::vector<double> out(g.nodes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [a, b] = detail::cell(g, i);
    out[i] = detail::gauss_legendre5(f, a, b) / (b - a);
  }
  return out;
}

/// Pointwise evaluation of an initial condition.
inline auto initial_function(const InitialCondition& ic, const Grid& g) {
  return std::visit(
      [&g](const auto& kind) -> std::function<double(double)> {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, OneMinusCos>) {
          return [](double x) { return 1.0 - std::cos(x); };
        } else if constexpr (std::is_same_v<K, Gaussian>) {
          if (!(kind.width > 0.0))
            throw InvalidParameter("initial", "gaussian width must be > 0");
          return [kind](double x) {
            const double z = (x - kind.center) / kind.width;
            return kind.amplitude * std::exp(-z * z);
          };
        } else {
          auto table = std::make_shared<Table>(load_table(kind.path));
          const double tol = 1e-12 * std::max(1.0, g.L);
          if (table->front() > tol || table->back() < g.L - tol)
            throw DataError("tabulated initial data '" + kind.path +
                            "' does not cover [0, L]");
          return [table](double x) { return (*table)(x); };
        }
      },
      ic);
}

/// Discrete initial state: cell averages at every node, with nodes 1, Nx and
/// Nx+1 (0-based 0, nx-1, nx) pinned to zero.
inline std::vector<double> sample_initial(const InitialCondition& ic,
                                          const Grid& g) {
  auto values = cell_averages(initial_function(ic, g), g);
  values[0] = 0.0;
  values[g.nodes() - 2] = 0.0;
  values[g.nodes() - 1] = 0.0;
  return values;
}

// ---------------------------------------------------------------------------
// Damping

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Interval&) const = default;
  double length() const noexcept { return hi - lo; }
};

/// Cell-discretized feedback gain a_delta together with its bounds.
struct DampingProfile {
  std::vector<double> a_delta;  // one entry per node
  double a0 = 0.0;              // lower bound on omega
  double a1 = 0.0;              // upper bound, max entry
  Interval omega;
};

/// Cell averages of a(x) = a0 * 1_omega(x).
inline DampingProfile sample_damping(double a0, Interval omega, const Grid& g) {
  if (!(a0 > 0.0) || !std::isfinite(a0)) throw InvalidParameter("a0", "must be > 0");
  if (!(omega.lo < omega.hi))
    throw InvalidParameter("omega", "interval is empty");
  if (omega.lo < 0.0 || omega.hi > g.L)
    throw InvalidParameter("omega", "interval must lie in [0, L]");

  DampingProfile d;
  d.a0 = a0;
  d.omega = omega;
  d.a_delta.resize(g.nodes());
  double amax = 0.0;
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const auto [a, b] = detail::cell(g, i);
    const double overlap = std::max(0.0, std::min(b, omega.hi) - std::max(a, omega.lo));
    const double v = std::clamp(a0 * overlap / (b - a), 0.0, a0);
    d.a_delta[i] = v;
    amax = std::max(amax, v);
  }
  d.a1 = amax;
  return d;
}

// ---------------------------------------------------------------------------
// Critical lengths

struct CriticalPair {
  int k = 0;
  int l = 0;
  bool operator==(const CriticalPair&) const = default;
};

inline double critical_length(int k, int l) {
  const double kk = k, ll = l;
  return 2.0 * std::numbers::pi * std::sqrt((kk * kk + kk * ll + ll * ll) / 3.0);
}

/// All pairs 1 <= k <= l <= k_max whose critical length matches L to 1e-9*L.
inline std::vector<CriticalPair> is_critical_length(double L, int k_max) {
  if (k_max < 1) throw InvalidParameter("k_max", "must be >= 1");
  std::vector<CriticalPair> hits;
  for (int k = 1; k <= k_max; ++k)
    for (int l = k; l <= k_max; ++l)
      if (std::abs(L - critical_length(k, l)) <= 1e-9 * std::abs(L))
        hits.push_back({k, l});
  return hits;
}

}  // namespace kdvsat
