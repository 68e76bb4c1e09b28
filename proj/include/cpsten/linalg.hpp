#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cpsten/errors.hpp"

namespace cps {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

namespace tol {
inline constexpr double eig = 1e-10;
inline constexpr double lin = 1e-10;
inline constexpr double structure = 1e-8;
inline constexpr double pivot = 1e-12;
inline constexpr double abs_floor = 1e-12;
inline constexpr int jacobi_max_sweeps = 100;
}  // namespace tol

/// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static CMatrix identity(std::size_t dim);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix conj() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, std::span<const cplx> x);

double frob_norm(const CMatrix& a);
/// sum conj(a_ij) b_ij
cplx frob_inner(const CMatrix& a, const CMatrix& b);
double norm(std::span<const cplx> v);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);  // sum conj(a_i) b_i
CMatrix outer(std::span<const cplx> u, std::span<const cplx> v);  // u v^T

/// ||A - A^H||_F relative to ||A||_F (absolute when A is tiny).
double hermitian_residual(const CMatrix& a);

/// Square matrix equal to its conjugate transpose within tol::structure.
class HermMatrix {
 public:
  HermMatrix() = default;
  /// Throws NonHermitianInput when the symmetry residual exceeds tol::structure.
  explicit HermMatrix(CMatrix m);

  /// Replaces m by (m + m^H)/2 without checking.
  static HermMatrix hermitize(const CMatrix& m);
  static HermMatrix identity(std::size_t dim) { return HermMatrix(CMatrix::identity(dim)); }
  static HermMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

 private:
  struct Unchecked {};
  HermMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}
  CMatrix m_;
};

struct HermEigen {
  std::vector<double> values;  // descending
  CMatrix vectors;             // orthonormal columns, column k pairs with values[k]

  /// V diag(f(values)) V^H
  template <class F>
  HermMatrix rebuild(F&& f) const;
};

/// Cyclic Jacobi rotations. Throws NoConvergence after tol::jacobi_max_sweeps sweeps.
HermEigen herm_eig(const HermMatrix& x);

/// Same, but starts from the unitary `basis` (typically the eigenvectors of a nearby matrix):
/// rotates x into that basis first so only a few sweeps remain.
HermEigen herm_eig(const HermMatrix& x, const CMatrix& basis);

HermMatrix project_psd(const HermMatrix& x);
HermMatrix eig_soft_threshold(const HermMatrix& x, double tau);

/// Partial-pivot LU. Throws SingularMatrix when a pivot drops below tol::pivot (relative).
CVector solve_linear(const CMatrix& a, std::span<const cplx> b);

/// |lambda_2| / |lambda_1| over the spectrum ordered by modulus. Throws ZeroMatrix.
double top_singular_ratio(const HermMatrix& x);
double top_singular_ratio(const HermEigen& eig);

// Implementation of the template above.
template <class F>
HermMatrix HermEigen::rebuild(F&& f) const {
  const std::size_t n = values.size();
  CMatrix out(n, n);
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = f(values[k]);
  for (std::size_t k = 0; k < n; ++k) {
    if (w[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = vectors(i, k) * w[k];
      if (vik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(vectors(j, k));
    }
  }
  return HermMatrix::hermitize(out);
}

}  // namespace cps
