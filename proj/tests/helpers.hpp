#pragma once

#include <complex>
#include <random>

#include "cpsten/linalg.hpp"
#include "cpsten/tensor.hpp"

namespace testutil {

using cps::cplx;

inline cps::CVector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  cps::CVector v(n);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  return v;
}

inline cps::CVector random_unit(std::size_t n, std::mt19937_64& rng) {
  auto v = random_vector(n, rng);
  const double s = cps::norm(v);
  for (auto& z : v) z /= s;
  return v;
}

inline cps::CMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  return cps::CMatrix(r, c, random_vector(r * c, rng));
}

inline cps::HermMatrix random_herm(std::size_t n, std::mt19937_64& rng) {
  return cps::HermMatrix::hermitize(random_matrix(n, n, rng));
}

inline cps::CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  return cps::herm_eig(random_herm(n, rng)).vectors;
}

inline double nuclear_norm(const cps::HermMatrix& x) {
  double s = 0.0;
  for (double v : cps::herm_eig(x).values) s += std::abs(v);
  return s;
}

inline double dist(const cps::CMatrix& a, const cps::CMatrix& b) { return cps::frob_norm(a - b); }

inline cps::DenseTensor random_tensor(std::size_t n, std::size_t order, std::mt19937_64& rng) {
  return cps::DenseTensor::from_entries(n, order, random_vector(cps::ipow(n, order), rng));
}

inline cps::DenseTensor random_ps(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  return cps::symmetrize_ps(random_tensor(n, 2 * d, rng));
}

inline cps::DenseTensor random_cps_tensor(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  return cps::hermitian_part(random_ps(n, d, rng));
}

inline cps::DenseTensor random_sym(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  return cps::symmetrize(random_tensor(n, d, rng));
}

// T_1122 = T_2211 = 1
inline cps::DenseTensor gap_tensor() {
  auto t = cps::DenseTensor::zero(2, 4);
  t.set({1, 1, 2, 2}, 1.0);
  t.set({2, 2, 1, 1}, 1.0);
  return t;
}

// conj(A) (x) A with A = [[1, 1+i], [1+i, 2]]: rank-one standard matricization, not rank-one as a tensor.
inline cps::DenseTensor square_lift_tensor() {
  const cplx i(0, 1);
  const cps::CVector a{1.0, 1.0 + i, 1.0 + i, 2.0};
  auto t = cps::DenseTensor::zero(2, 4);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = 0; q < 4; ++q) t[p * 4 + q] = std::conj(a[p]) * a[q];
  return t;
}

inline cps::CVector conj_vec(cps::CVector v) {
  for (auto& z : v) z = std::conj(z);
  return v;
}

inline double dist(const cps::DenseTensor& a, const cps::DenseTensor& b) { return cps::frob_norm(a - b); }

// min over theta of ||x - e^{i theta} y||
inline double phase_dist(const cps::CVector& x, const cps::CVector& y) {
  cplx ip{};
  for (std::size_t k = 0; k < x.size(); ++k) ip += std::conj(y[k]) * x[k];
  const cplx rot = ip == cplx{} ? cplx(1.0) : ip / std::abs(ip);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k] - rot * y[k]);
  return std::sqrt(s);
}

inline cps::DenseTensor rank_one_cps(double lambda, const cps::CVector& a, std::size_t d) {
  const cps::CpsTerm t{lambda, a};
  return cps::assemble(std::span<const cps::CpsTerm>(&t, 1), a.size(), d);
}

}  // namespace testutil
