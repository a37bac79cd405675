#pragma once

// Band storage, banded products and a pivoted banded LU.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "kdvsat/error.hpp"

namespace kdvsat {

/// Square matrix whose nonzeros sit on diagonals -lower..upper.
///
/// Entry (i, j) with offset j - i in [-lower, upper] is stored at
/// bands[(j - i + lower) * n + i]; slots that would fall outside the matrix
/// are kept at zero so every diagonal has the same length n.
template <class Real = double>
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
      : n_(n), lower_(lower), upper_(upper), bands_((lower + upper + 1) * n, Real{}) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t lower() const noexcept { return lower_; }
  std::size_t upper() const noexcept { return upper_; }

  bool in_band(std::size_t i, std::size_t j) const noexcept {
    return j + lower_ >= i && i + upper_ >= j;
  }

  /// Zero outside the band.
  Real operator()(std::size_t i, std::size_t j) const noexcept {
    return in_band(i, j) ? bands_[slot(i, j)] : Real{};
  }

  /// Mutable access; (i, j) must be inside the band.
  Real& at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_band(i, j))
      throw InvalidParameter("index", "entry outside band");
    return bands_[slot(i, j)];
  }

  void set(std::size_t i, std::size_t j, Real v) { at(i, j) = v; }

  std::span<const Real> storage() const noexcept { return bands_; }

  /// Row-major dense copy.
  std::vector<Real> to_dense() const {
    std::vector<Real> d(n_ * n_, Real{});
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = col_begin(i); j < col_end(i); ++j)
        d[i * n_ + j] = bands_[slot(i, j)];
    return d;
  }

  /// Builds a banded matrix from row-major dense data, keeping only the band.
  static BandedMatrix from_dense(std::span<const Real> dense, std::size_t n,
                                 std::size_t lower, std::size_t upper) {
    if (dense.size() != n * n)
      throw InvalidParameter("dense", "size does not match n*n");
    BandedMatrix m(n, lower, upper);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = m.col_begin(i); j < m.col_end(i); ++j)
        m.bands_[m.slot(i, j)] = dense[i * n + j];
    return m;
  }

  std::size_t col_begin(std::size_t i) const noexcept {
    return i > lower_ ? i - lower_ : 0;
  }
  std::size_t col_end(std::size_t i) const noexcept {
    return std::min(n_, i + upper_ + 1);
  }

 private:
  std::size_t slot(std::size_t i, std::size_t j) const noexcept {
    return (j + lower_ - i) * n_ + i;
  }

  std::size_t n_ = 0;
  std::size_t lower_ = 0;
  std::size_t upper_ = 0;
  std::vector<Real> bands_;
};

template <class Real>
std::vector<Real> matvec(const BandedMatrix<Real>& m, std::span<const Real> v) {
  if (v.size() != m.size())
    throw InvalidParameter("v", "length does not match matrix dimension");
  std::vector<Real> out(m.size(), Real{});
  for (std::size_t i = 0; i < m.size(); ++i) {
    Real acc{};
    for (std::size_t j = m.col_begin(i); j < m.col_end(i); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

template <class Real>
std::vector<Real> matvec(const BandedMatrix<Real>& m, const std::vector<Real>& v) {
  return matvec(m, std::span<const Real>(v));
}

/// Product of two banded matrices; bandwidths add.
template <class Real>
BandedMatrix<Real> multiply(const BandedMatrix<Real>& a, const BandedMatrix<Real>& b) {
  if (a.size() != b.size()) throw InvalidParameter("b", "dimension mismatch");
  const std::size_t n = a.size();
  BandedMatrix<Real> c(n, a.lower() + b.lower(), a.upper() + b.upper());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = a.col_begin(i); k < a.col_end(i); ++k) {
      const Real aik = a(i, k);
      if (aik == Real{}) continue;
      for (std::size_t j = b.col_begin(k); j < b.col_end(k); ++j)
        c.at(i, j) += aik * b(k, j);
    }
  return c;
}

/// alpha * a + beta * b with the union bandwidth.
template <class Real>
BandedMatrix<Real> combine(Real alpha, const BandedMatrix<Real>& a, Real beta,
                           const BandedMatrix<Real>& b) {
  if (a.size() != b.size()) throw InvalidParameter("b", "dimension mismatch");
  BandedMatrix<Real> c(a.size(), std::max(a.lower(), b.lower()),
                       std::max(a.upper(), b.upper()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = a.col_begin(i); j < a.col_end(i); ++j) c.at(i, j) += alpha * a(i, j);
    for (std::size_t j = b.col_begin(i); j < b.col_end(i); ++j) c.at(i, j) += beta * b(i, j);
  }
  return c;
}

template <class Real>
BandedMatrix<Real> identity(std::size_t n) {
  BandedMatrix<Real> m(n, 0, 0);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, Real{1});
  return m;
}

/// Dense CSV dump, row-major, zeros included.
template <class Real>
void write_dense_csv(std::ostream& os, const BandedMatrix<Real>& m) {
  const auto prec = os.precision(17);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  os.precision(prec);
}

/// LU factorization with partial (row) pivoting in band storage.
///
/// Row interchanges widen U to lower + upper super-diagonals; the working
/// band is allocated at that width up front. Immutable after construction, so
/// concurrent solve() calls are safe.
template <class Real = double>
class BandedLU {
 public:
  BandedLU() = default;

  explicit BandedLU(const BandedMatrix<Real>& m)
      : n_(m.size()), kl_(m.lower()), ku_(m.upper() + m.lower()),
        work_(n_, kl_, ku_), pivots_(n_) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = m.col_begin(i); j < m.col_end(i); ++j) work_.at(i, j) = m(i, j);
    factorize();
  }

  std::size_t size() const noexcept { return n_; }

  std::vector<Real> solve(std::span<const Real> rhs) const {
    std::vector<Real> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
  }

  void solve_in_place(std::span<Real> x) const {
    if (x.size() != n_) throw InvalidParameter("rhs", "length does not match matrix dimension");
    // Forward: apply P and L column by column.
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t p = pivots_[k];
      if (p != k) std::swap(x[k], x[p]);
      const std::size_t last = std::min(n_ - 1, k + kl_);
      for (std::size_t i = k + 1; i <= last; ++i) x[i] -= work_(i, k) * x[k];
    }
    // Backward: U has ku_ super-diagonals.
    for (std::size_t k = n_; k-- > 0;) {
      Real acc = x[k];
      const std::size_t last = std::min(n_ - 1, k + ku_);
      for (std::size_t j = k + 1; j <= last; ++j) acc -= work_(k, j) * x[j];
      x[k] = acc / work_(k, k);
    }
  }

 private:
  void factorize() {
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t last_row = std::min(n_ - 1, k + kl_);
      std::size_t p = k;
      Real best = std::abs(work_(k, k));
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        const Real cand = std::abs(work_(i, k));
        if (cand > best) {
          best = cand;
          p = i;
        }
      }
      pivots_[k] = p;
      if (best == Real{}) throw NumericalBreakdown(k);

      const std::size_t last_col = std::min(n_ - 1, k + ku_);
      if (p != k)
        for (std::size_t j = k; j <= last_col; ++j) std::swap(work_.at(k, j), work_.at(p, j));

      const Real pivot = work_(k, k);
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        Real& lik = work_.at(i, k);
        if (lik == Real{}) continue;
        lik /= pivot;
        for (std::size_t j = k + 1; j <= last_col; ++j) work_.at(i, j) -= lik * work_(k, j);
      }
    }
  }

  std::size_t n_ = 0;
  std::size_t kl_ = 0;
  std::size_t ku_ = 0;
  BandedMatrix<Real> work_;
  std::vector<std::size_t> pivots_;
};

}  // namespace kdvsat
