#pragma once

// Finite-difference matrices of the implicit KdV scheme.
//
// The unknowns are nodes 1..Nx (0-based 0..nx-1); node Nx+1 is pinned to zero
// and never enters the linear algebra.

#include <algorithm>
#include <span>
#include <vector>

#include "kdvsat/banded.hpp"
#include "kdvsat/grid.hpp"

namespace kdvsat {

using Banded = BandedMatrix<double>;

/// (1/dx) * (1 on the diagonal, -1 on the first sub-diagonal).
inline Banded build_d_minus(std::size_t n, double dx) {
  if (n < 3) throw InvalidParameter("n", "must be >= 3");
  if (!(dx > 0.0)) throw InvalidParameter("dx", "must be > 0");
  Banded m(n, 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, 1.0 / dx);
    if (i > 0) m.set(i, i - 1, -1.0 / dx);
  }
  return m;
}

/// (1/dx) * (-1 on the diagonal, 1 on the first super-diagonal).
inline Banded build_d_plus(std::size_t n, double dx) {
  if (n < 3) throw InvalidParameter("n", "must be >= 3");
  if (!(dx > 0.0)) throw InvalidParameter("dx", "must be > 0");
  Banded m(n, 0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, -1.0 / dx);
    if (i + 1 < n) m.set(i, i + 1, 1.0 / dx);
  }
  return m;
}

/// Principal submatrix on rows/columns [first, last).
inline Banded interior_block(const Banded& m, std::size_t first, std::size_t last) {
  if (!(first < last && last <= m.size()))
    throw InvalidParameter("block", "empty or out-of-range index range");
  Banded sub(last - first, m.lower(), m.upper());
  for (std::size_t i = first; i < last; ++i)
    for (std::size_t j = std::max(first, m.col_begin(i)); j < std::min(last, m.col_end(i)); ++j)
      sub.set(i - first, j - first, m(i, j));
  return sub;
}

struct OperatorSet {
  Banded d_minus;
  Banded d_plus;
  Banded d;      // centered first difference (D+ + D-)/2
  Banded a_mat;  // D+ D+ D- + D
  Banded c_mat;  // I + dt * A, the implicit-Euler system matrix
  BandedLU<double> c_factor;
  // Factorization of C restricted to nodes 2..Nx-1 (0-based 1..n-2): the
  // system the stepper solves once nodes 1 and Nx are pinned to zero.
  BandedLU<double> pinned_factor;
  double dt = 0.0;
  double dx = 0.0;

  std::size_t size() const noexcept { return d.size(); }
};

inline OperatorSet build_operator_set(const Grid& g) {
  const std::size_t n = static_cast<std::size_t>(g.nx);
  OperatorSet ops;
  ops.dt = g.dt;
  ops.dx = g.dx;
  ops.d_minus = build_d_minus(n, g.dx);
  ops.d_plus = build_d_plus(n, g.dx);
  ops.d = combine(0.5, ops.d_plus, 0.5, ops.d_minus);
  const Banded third = multiply(multiply(ops.d_plus, ops.d_plus), ops.d_minus);
  ops.a_mat = combine(1.0, third, 1.0, ops.d);
  ops.c_mat = combine(1.0, identity<double>(n), g.dt, ops.a_mat);
  ops.c_factor = BandedLU<double>(ops.c_mat);
  ops.pinned_factor = BandedLU<double>(interior_block(ops.c_mat, 1, n - 1));
  return ops;
}

/// Solves C x = rhs with the stored factorization.
inline std::vector<double> solve_c(const OperatorSet& ops, std::span<const double> rhs) {
  if (rhs.size() != ops.size())
    throw InvalidParameter("rhs", "length does not match operator dimension");
  return ops.c_factor.solve(rhs);
}

}  // namespace kdvsat

namespace kdvsat {

/// Solves C x = rhs subject to x_1 = x_Nx = 0: the pinned rows are dropped and
/// the pinned columns contribute nothing, so only the interior block is used.
/// rhs entries at pinned nodes are ignored.
inline void solve_c_pinned_in_place(const OperatorSet& ops, std::span<double> x) {
  const std::size_t n = ops.size();
  if (x.size() != n) throw InvalidParameter("rhs", "length does not match operator dimension");
  ops.pinned_factor.solve_in_place(x.subspan(1, n - 2));
  x[0] = 0.0;
  x[n - 1] = 0.0;
}

inline std::vector<double> solve_c_pinned(const OperatorSet& ops, std::span<const double> rhs) {
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_c_pinned_in_place(ops, x);
  return x;
}

}  // namespace kdvsat
