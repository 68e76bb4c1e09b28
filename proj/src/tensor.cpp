#include "cpsten/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cps {

CVector conj_copy(std::span<const cplx> v) {
  CVector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::conj(v[k]);
  return out;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

std::vector<std::size_t> digits(std::size_t offset, std::size_t n, std::size_t len) {
  std::vector<std::size_t> out(len);
  for (std::size_t k = len; k-- > 0;) {
    out[k] = offset % n;
    offset /= n;
  }
  return out;
}

DenseTensor DenseTensor::zero(std::size_t n, std::size_t order) {
  if (n == 0 || order == 0) throw Error(ErrorCode::SizeMismatch, "dimension and order must be positive");
  return DenseTensor(n, order, std::vector<cplx>(ipow(n, order)));
}

DenseTensor DenseTensor::from_entries(std::size_t n, std::size_t order, std::vector<cplx> entries) {
  if (n == 0 || order == 0) throw Error(ErrorCode::SizeMismatch, "dimension and order must be positive");
  if (entries.size() != ipow(n, order)) {
    throw Error(ErrorCode::SizeMismatch, "expected " + std::to_string(ipow(n, order)) + " entries, got " +
                                             std::to_string(entries.size()));
  }
  for (const auto& z : entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::RangeError, "non-finite tensor entry");
    }
  }
  return DenseTensor(n, order, std::move(entries));
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != order_) throw Error(ErrorCode::SizeMismatch, "multi-index length differs from order");
  std::size_t off = 0;
  for (std::size_t i : index) {
    if (i < 1 || i > n_) throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(i));
    off = off * n_ + (i - 1);
  }
  return off;
}

cplx DenseTensor::entry(std::initializer_list<std::size_t> index) const {
  return entry(std::span<const std::size_t>(index.begin(), index.size()));
}

void DenseTensor::set(std::initializer_list<std::size_t> index, cplx value) {
  set(std::span<const std::size_t>(index.begin(), index.size()), value);
}

static void require_same_shape(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim() || a.order() != b.order()) throw Error(ErrorCode::SizeMismatch, "tensor shapes differ");
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(cplx s, DenseTensor a) { return a *= s; }

DenseTensor conj(DenseTensor t) {
  for (auto& z : t.data()) z = std::conj(z);
  return t;
}

namespace {

std::size_t half_order(const DenseTensor& t) {
  if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "order " + std::to_string(t.order()) + " is odd");
  return t.order() / 2;
}

// Offset with modes [from, from+len) sorted ascending.
std::size_t sort_block(std::size_t off, std::size_t n, std::size_t order, std::size_t from, std::size_t len) {
  auto dig = digits(off, n, order);
  std::sort(dig.begin() + from, dig.begin() + from + len);
  std::size_t out = 0;
  for (std::size_t v : dig) out = out * n + v;
  return out;
}

// Offset with first and second halves swapped.
std::size_t swap_halves(std::size_t off, std::size_t half_size) {
  return (off % half_size) * half_size + off / half_size;
}

// Orbit averaging: each offset is mapped to a canonical representative.
template <class Canon>
DenseTensor orbit_average(const DenseTensor& r, Canon canon) {
  std::vector<cplx> sum(r.size());
  std::vector<double> count(r.size());
  std::vector<std::size_t> rep(r.size());
  for (std::size_t off = 0; off < r.size(); ++off) {
    rep[off] = canon(off);
    sum[rep[off]] += r[off];
    count[rep[off]] += 1.0;
  }
  std::vector<cplx> out(r.size());
  for (std::size_t off = 0; off < r.size(); ++off) out[off] = sum[rep[off]] / count[rep[off]];
  return DenseTensor::from_entries(r.dim(), r.order(), std::move(out));
}

}  // namespace

double structure_tol(const DenseTensor& t) { return std::max(tol::structure * frob_norm(t), tol::abs_floor); }

bool is_symmetric(const DenseTensor& t) {
  const double thr = structure_tol(t);
  for (std::size_t off = 0; off < t.size(); ++off) {
    if (std::abs(t[off] - t[sort_block(off, t.dim(), t.order(), 0, t.order())]) > thr) return false;
  }
  return true;
}

bool is_ps(const DenseTensor& t) {
  const std::size_t d = half_order(t);
  const double thr = structure_tol(t);
  for (std::size_t off = 0; off < t.size(); ++off) {
    std::size_t c = sort_block(off, t.dim(), t.order(), 0, d);
    c = sort_block(c, t.dim(), t.order(), d, d);
    if (std::abs(t[off] - t[c]) > thr) return false;
  }
  return true;
}

bool is_cps(const DenseTensor& t) {
  if (!is_ps(t)) return false;
  const std::size_t hs = ipow(t.dim(), t.order() / 2);
  const double thr = structure_tol(t);
  for (std::size_t off = 0; off < t.size(); ++off) {
    if (std::abs(t[off] - std::conj(t[swap_halves(off, hs)])) > thr) return false;
  }
  return true;
}

DenseTensor conj_transpose(const DenseTensor& t) {
  if (!is_ps(t)) throw Error(ErrorCode::NotPartialSymmetric, "conjugate transpose needs a PS tensor");
  const std::size_t hs = ipow(t.dim(), t.order() / 2);
  std::vector<cplx> out(t.size());
  for (std::size_t off = 0; off < t.size(); ++off) out[off] = std::conj(t[swap_halves(off, hs)]);
  return DenseTensor::from_entries(t.dim(), t.order(), std::move(out));
}

DenseTensor hermitian_part(const DenseTensor& t) { return 0.5 * (t + conj_transpose(t)); }

DenseTensor skew_part(const DenseTensor& t) { return 0.5 * (t - conj_transpose(t)); }

std::pair<DenseTensor, DenseTensor> cartesian_split(const DenseTensor& t) {
  const DenseTensor h = conj_transpose(t);
  return {0.5 * (t + h), cplx(0, -0.5) * (t - h)};
}

cplx frob_inner(const DenseTensor& u, const DenseTensor& v) {
  require_same_shape(u, v);
  cplx s{};
  for (std::size_t k = 0; k < u.size(); ++k) s += std::conj(u[k]) * v[k];
  return s;
}

double frob_norm(const DenseTensor& t) {
  double s = 0.0;
  for (const auto& z : t.data()) s += std::norm(z);
  return std::sqrt(s);
}

CVector tensor_power(std::span<const cplx> x, std::size_t k) {
  CVector u{1.0};
  for (std::size_t m = 0; m < k; ++m) {
    CVector next(u.size() * x.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) next[i * x.size() + j] = u[i] * x[j];
    u = std::move(next);
  }
  return u;
}

cplx conj_form_eval(const DenseTensor& t, std::span<const cplx> x) {
  const std::size_t d = half_order(t);
  if (x.size() != t.dim()) throw Error(ErrorCode::SizeMismatch, "vector length differs from tensor dimension");
  const CVector u = tensor_power(x, d);
  const std::size_t hs = u.size();
  cplx s{};
  for (std::size_t i = 0; i < hs; ++i) {
    cplx row{};
    for (std::size_t j = 0; j < hs; ++j) row += t[i * hs + j] * u[j];
    s += std::conj(u[i]) * row;
  }
  return s;
}

CVector partial_map(const DenseTensor& t, std::span<const cplx> x) {
  const std::size_t d = half_order(t);
  if (x.size() != t.dim()) throw Error(ErrorCode::SizeMismatch, "vector length differs from tensor dimension");
  const std::size_t n = t.dim();
  const CVector u = tensor_power(x, d);
  const CVector w = tensor_power(x, d - 1);
  const std::size_t hs = u.size();
  CVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s{};
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::size_t row = i * w.size() + k;
      cplx r{};
      for (std::size_t j = 0; j < hs; ++j) r += t[row * hs + j] * u[j];
      s += std::conj(w[k]) * r;
    }
    out[i] = s;
  }
  return out;
}

namespace {

template <class Term>
DenseTensor assemble_impl(std::span<const Term> terms, std::size_t n, std::size_t d) {
  DenseTensor out = DenseTensor::zero(n, 2 * d);
  const std::size_t hs = ipow(n, d);
  for (const auto& term : terms) {
    if (term.a.size() != n) throw Error(ErrorCode::SizeMismatch, "term vector length differs from n");
    const CVector u = tensor_power(term.a, d);
    for (std::size_t i = 0; i < hs; ++i) {
      const cplx li = cplx(term.lambda) * std::conj(u[i]);
      for (std::size_t j = 0; j < hs; ++j) out[i * hs + j] += li * u[j];
    }
  }
  return out;
}

}  // namespace

DenseTensor assemble(std::span<const CpsTerm> terms, std::size_t n, std::size_t d) {
  return assemble_impl(terms, n, d);
}

DenseTensor assemble(std::span<const PsTerm> terms, std::size_t n, std::size_t d) {
  return assemble_impl(terms, n, d);
}

DenseTensor symmetrize_ps(const DenseTensor& r) {
  const std::size_t d = half_order(r);
  return orbit_average(r, [&](std::size_t off) {
    return sort_block(sort_block(off, r.dim(), r.order(), 0, d), r.dim(), r.order(), d, d);
  });
}

DenseTensor symmetrize(const DenseTensor& r) {
  return orbit_average(r, [&](std::size_t off) { return sort_block(off, r.dim(), r.order(), 0, r.order()); });
}

DenseTensor outer(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::SizeMismatch, "tensor dimensions differ");
  std::vector<cplx> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return DenseTensor::from_entries(a.dim(), a.order() + b.order(), std::move(out));
}

}  // namespace cps
