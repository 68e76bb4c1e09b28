#include "cpsten/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cps {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::OddOrder: return "OddOrder";
    case ErrorCode::NotPartialSymmetric: return "NotPartialSymmetric";
    case ErrorCode::NotCps: return "NotCps";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonSymmetricEigenvector: return "NonSymmetricEigenvector";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::BadPermutation: return "BadPermutation";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::NotInSubspace: return "NotInSubspace";
    case ErrorCode::DegenerateNodes: return "DegenerateNodes";
    case ErrorCode::TermBudgetExceeded: return "TermBudgetExceeded";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::Uncertified: return "Uncertified";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::SizeMismatch, "matrix entry count does not match shape");
  }
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix CMatrix::conj() const {
  CMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

static void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::SizeMismatch, "matrix shapes differ");
  }
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::SizeMismatch, "inner dimensions differ");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      const cplx* brow = &b(k, 0);
      cplx* orow = &out(i, 0);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

CVector operator*(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::SizeMismatch, "vector length differs");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s{};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

double frob_norm(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

cplx frob_inner(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b);
  cplx s{};
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) s += std::conj(da[k]) * db[k];
  return s;
}

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "vector lengths differ");
  cplx s{};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

CMatrix outer(std::span<const cplx> u, std::span<const cplx> v) {
  CMatrix out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * v[j];
  return out;
}

double hermitian_residual(const CMatrix& a) {
  if (!a.square()) return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) diff += std::norm(a(i, j) - std::conj(a(j, i)));
  const double scale = std::max(frob_norm(a), tol::abs_floor);
  return std::sqrt(diff) / (scale > 1.0 ? scale : 1.0);
}

HermMatrix::HermMatrix(CMatrix m) : m_(std::move(m)) {
  if (!m_.square()) throw Error(ErrorCode::NonHermitianInput, "matrix is not square");
  const double res = hermitian_residual(m_);
  if (res > tol::structure) {
    throw Error(ErrorCode::NonHermitianInput, "symmetry residual " + std::to_string(res));
  }
}

HermMatrix HermMatrix::hermitize(const CMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::SizeMismatch, "matrix is not square");
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return HermMatrix(std::move(out), Unchecked{});
}

HermMatrix HermMatrix::diagonal(std::span<const double> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return HermMatrix(std::move(m), Unchecked{});
}

namespace {

// In-place cyclic Jacobi on a full Hermitian matrix `a` (n x n, row-major).
// `vt` holds the transposed eigenvector matrix so rotations touch contiguous rows.
void jacobi(CMatrix& a, CMatrix& vt) {
  const std::size_t n = a.rows();
  const double scale = frob_norm(a);
  if (scale == 0.0 || n < 2) return;
  const double skip = 1e-17 * scale;

  for (int sweep = 0; sweep < tol::jacobi_max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-14 * scale) return;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double g = std::abs(apq);
        if (g <= skip) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const cplx e = std::conj(apq) / g;
        const double theta = (aqq - app) / (2.0 * g);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx ec = std::conj(e);

        cplx* rp = &a(p, 0);
        cplx* rq = &a(q, 0);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const cplx xp = rp[k];
          const cplx xq = rq[k];
          rp[k] = c * xp - s * ec * xq;
          rq[k] = s * xp + c * ec * xq;
          a(k, p) = std::conj(rp[k]);
          a(k, q) = std::conj(rq[k]);
        }
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        // V <- V G, i.e. rows p, q of V^T.
        cplx* vp = &vt(p, 0);
        cplx* vq = &vt(q, 0);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx xp = vp[k];
          const cplx xq = vq[k];
          vp[k] = c * xp - s * e * xq;
          vq[k] = s * xp + c * e * xq;
        }
      }
    }
  }
  throw Error(ErrorCode::NoConvergence, "Jacobi sweep cap reached");
}

HermEigen sorted_eigen(const CMatrix& a, const CMatrix& vt) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });
  HermEigen out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vt(order[k], i);
  }
  return out;
}

}  // namespace

HermEigen herm_eig(const HermMatrix& x) {
  CMatrix a = x.matrix();
  CMatrix vt = CMatrix::identity(x.dim());
  jacobi(a, vt);
  return sorted_eigen(a, vt);
}

HermEigen herm_eig(const HermMatrix& x, const CMatrix& basis) {
  if (basis.rows() != x.dim() || basis.cols() != x.dim()) {
    throw Error(ErrorCode::SizeMismatch, "basis shape differs from matrix");
  }
  CMatrix a = HermMatrix::hermitize(basis.adjoint() * x.matrix() * basis).matrix();
  CMatrix vt = basis.adjoint().conj();  // rows of vt are columns of basis
  jacobi(a, vt);
  return sorted_eigen(a, vt);
}

HermMatrix project_psd(const HermMatrix& x) {
  return herm_eig(x).rebuild([](double l) { return l > 0.0 ? l : 0.0; });
}

HermMatrix eig_soft_threshold(const HermMatrix& x, double tau) {
  if (tau < 0.0) throw Error(ErrorCode::RangeError, "threshold must be nonnegative");
  if (tau == 0.0) return x;
  return herm_eig(x).rebuild([tau](double l) {
    if (l > tau) return l - tau;
    if (l < -tau) return l + tau;
    return 0.0;
  });
}

CVector solve_linear(const CMatrix& a, std::span<const cplx> b) {
  if (!a.square()) throw Error(ErrorCode::SizeMismatch, "system matrix is not square");
  if (b.size() != a.rows()) throw Error(ErrorCode::SizeMismatch, "rhs length differs");
  const std::size_t n = a.rows();
  CMatrix lu = a;
  CVector x(b.begin(), b.end());
  double amax = 0.0;
  for (const auto& z : a.data()) amax = std::max(amax, std::abs(z));
  const double floor = tol::pivot * std::max(amax, tol::abs_floor);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (std::abs(lu(piv, k)) < floor || amax == 0.0) {
      throw Error(ErrorCode::SingularMatrix, "pivot below tolerance at column " + std::to_string(k));
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = lu(i, k) / lu(k, k);
      if (f == cplx{}) continue;
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    cplx s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= lu(k, j) * x[j];
    x[k] = s / lu(k, k);
  }
  return x;
}

double top_singular_ratio(const HermEigen& eig) {
  std::vector<double> mods(eig.values.size());
  std::transform(eig.values.begin(), eig.values.end(), mods.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(mods.begin(), mods.end(), std::greater<>());
  if (mods.empty() || mods[0] == 0.0) throw Error(ErrorCode::ZeroMatrix, "matrix is zero");
  return mods.size() < 2 ? 0.0 : mods[1] / mods[0];
}

double top_singular_ratio(const HermMatrix& x) {
  if (frob_norm(x.matrix()) == 0.0) throw Error(ErrorCode::ZeroMatrix, "matrix is zero");
  return top_singular_ratio(herm_eig(x));
}

}  // namespace cps
