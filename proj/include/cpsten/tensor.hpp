#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "cpsten/linalg.hpp"

namespace cps {

/// Dense complex tensor of order `order` and dimension `n` in every mode.
/// Entries follow the base-n map: offset(i1..ik) = sum (i_k - 1) n^(order-k), indices 1-based.
class DenseTensor {
 public:
  DenseTensor() = default;

  static DenseTensor zero(std::size_t n, std::size_t order);
  static DenseTensor from_entries(std::size_t n, std::size_t order, std::vector<cplx> entries);

  std::size_t dim() const noexcept { return n_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return data_.size(); }

  /// Throws IndexOutOfRange / SizeMismatch.
  std::size_t offset(std::span<const std::size_t> index) const;
  cplx entry(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  void set(std::span<const std::size_t> index, cplx value) { data_[offset(index)] = value; }
  cplx entry(std::initializer_list<std::size_t> index) const;
  void set(std::initializer_list<std::size_t> index, cplx value);

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }
  cplx operator[](std::size_t off) const { return data_[off]; }
  cplx& operator[](std::size_t off) { return data_[off]; }

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(cplx s);

 private:
  DenseTensor(std::size_t n, std::size_t order, std::vector<cplx> data)
      : n_(n), order_(order), data_(std::move(data)) {}
  std::size_t n_ = 0;
  std::size_t order_ = 0;
  std::vector<cplx> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(cplx s, DenseTensor a);
DenseTensor conj(DenseTensor t);

/// lambda * conj(a)^{(x)d} (x) a^{(x)d}
struct CpsTerm {
  double lambda = 0.0;
  CVector a;
};

struct PsTerm {
  cplx lambda;
  CVector a;
};

struct EigenPair {
  cplx value;
  CVector x;
};

CVector conj_copy(std::span<const cplx> v);

std::size_t ipow(std::size_t base, std::size_t exp);

/// Inverse of the base-n map, 0-based digits.
std::vector<std::size_t> digits(std::size_t offset, std::size_t n, std::size_t len);

/// Tolerance used by the predicates: max(tol::structure * ||T||, tol::abs_floor).
double structure_tol(const DenseTensor& t);

bool is_symmetric(const DenseTensor& t);
bool is_ps(const DenseTensor& t);   // throws OddOrder
bool is_cps(const DenseTensor& t);  // throws OddOrder

DenseTensor conj_transpose(const DenseTensor& t);  // throws NotPartialSymmetric
DenseTensor hermitian_part(const DenseTensor& t);
DenseTensor skew_part(const DenseTensor& t);
/// T = U + iV with U = H(T), V = -i S(T).
std::pair<DenseTensor, DenseTensor> cartesian_split(const DenseTensor& t);

cplx frob_inner(const DenseTensor& u, const DenseTensor& v);
double frob_norm(const DenseTensor& t);

/// x^{(x)k} as a vector of length n^k.
CVector tensor_power(std::span<const cplx> x, std::size_t k);

/// sum T_{i1..i2d} conj(x_i1)..conj(x_id) x_i(d+1)..x_i2d
cplx conj_form_eval(const DenseTensor& t, std::span<const cplx> x);
/// Entry i: the conjugate form with its first conjugated slot fixed to e_i.
CVector partial_map(const DenseTensor& t, std::span<const cplx> x);

DenseTensor assemble(std::span<const CpsTerm> terms, std::size_t n, std::size_t d);
DenseTensor assemble(std::span<const PsTerm> terms, std::size_t n, std::size_t d);

/// Average over permutations within the first half of the modes and within the second half.
DenseTensor symmetrize_ps(const DenseTensor& r);
/// Average over all permutations of the modes.
DenseTensor symmetrize(const DenseTensor& r);

/// (A (x) B)_{IJ} = A_I B_J
DenseTensor outer(const DenseTensor& a, const DenseTensor& b);

}  // namespace cps
