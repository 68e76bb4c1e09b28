#include <cmath>
#include <random>

#include "cpsten/decompose.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cps;
using testutil::dist;

namespace {

double hilbert_target(const CMatrix& a, std::size_t d, const CVector& x) {
  const auto y = a * std::span<const cplx>(x);
  cplx s{};
  for (const auto& v : y) s += std::pow(v, double(d));
  return std::norm(s);
}

double hilbert_sum(const std::vector<CpsTerm>& terms, std::size_t d, const CVector& x) {
  double s = 0.0;
  for (const auto& t : terms) {
    cplx ip{};
    for (std::size_t j = 0; j < x.size(); ++j) ip += t.a[j] * x[j];
    s += t.lambda * std::pow(std::abs(ip), 2.0 * double(d));
  }
  return s;
}

DenseTensor sym_power(const CVector& a, std::size_t d) {
  const auto u = tensor_power(a, d);
  return DenseTensor::from_entries(a.size(), d, u);
}

}  // namespace

TEST_CASE("spectral split") {
  std::mt19937_64 rng(1);
  const auto a = testutil::random_vector(3, rng);
  const CpsTerm term{1.0, a};
  const auto parts = spectral_split(assemble(std::span<const CpsTerm>(&term, 1), 3, 2));
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].sign == 1);
  // Z is a unit-phase multiple of a^{(x)2}
  const auto target = sym_power(a, 2);
  const cplx ip = frob_inner(parts[0].z, target);
  CHECK(std::abs(std::abs(ip) - frob_norm(target) * frob_norm(parts[0].z)) <= 1e-10 * std::abs(ip));
  CHECK(frob_norm(parts[0].z) == doctest::Approx(frob_norm(target)).epsilon(1e-10));

  const auto ex = spectral_split(testutil::gap_tensor());
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].sign == 1);
  CHECK(ex[1].sign == -1);

  const auto t = testutil::random_cps_tensor(2, 2, rng);
  DenseTensor back = DenseTensor::zero(2, 4);
  for (const auto& p : spectral_split(t)) {
    CHECK(is_symmetric(p.z));
    back += double(p.sign) * outer(conj(p.z), p.z);
  }
  CHECK(dist(back, t) <= 1e-10 * frob_norm(t));

  CHECK_THROWS_AS(spectral_split(testutil::random_ps(2, 2, rng)), Error);
}

TEST_CASE("symmetric rank-one decomposition") {
  std::mt19937_64 rng(2);
  for (std::size_t d : {1u, 2u, 3u, 4u}) {
    const auto a = testutil::random_vector(3, rng);
    const auto z = sym_power(a, d);
    const auto vecs = symmetric_rank_one_decompose(z);
    CHECK(vecs.size() <= std::size_t(1) << (d - 1));
    DenseTensor back = DenseTensor::zero(3, d);
    for (const auto& v : vecs) back += sym_power(v, d);
    CHECK(dist(back, z) <= 1e-10 * frob_norm(z));
  }

  // sym(e1 (x) e2) = 1/4 [(e1 + e2)^2 - (e1 - e2)^2]
  auto z = DenseTensor::zero(2, 2);
  z.set({1, 2}, 0.5);
  z.set({2, 1}, 0.5);
  const auto vecs = symmetric_rank_one_decompose(z);
  REQUIRE(vecs.size() == 2);
  const auto p0 = tensor_power(vecs[0], 2);
  const auto p1 = tensor_power(vecs[1], 2);
  const CVector e_plus{0.25, 0.25, 0.25, 0.25};
  const CVector e_minus{-0.25, 0.25, 0.25, -0.25};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(p0[k] - e_plus[k]) <= 1e-15);
    CHECK(std::abs(p1[k] - e_minus[k]) <= 1e-15);
  }

  for (std::size_t d : {2u, 3u}) {
    const auto zr = testutil::random_sym(3, d, rng);
    DenseTensor back = DenseTensor::zero(3, d);
    const auto vs = symmetric_rank_one_decompose(zr);
    for (const auto& v : vs) back += sym_power(v, d);
    CHECK(dist(back, zr) <= 1e-10 * frob_norm(zr));
    if (d == 3) CHECK(vs.size() <= 10 * 4);  // 10 multisets, 2^{d-1} signs each
  }

  CHECK_THROWS_AS(symmetric_rank_one_decompose(testutil::random_tensor(2, 2, rng)), Error);
  CHECK(symmetric_rank_one_decompose(DenseTensor::zero(2, 3)).empty());
}

TEST_CASE("Hilbert identity") {
  std::mt19937_64 rng(3);
  for (std::size_t d : {1u, 2u, 3u}) {
    for (std::size_t r : {1u, 2u, 3u}) {
      const auto a = testutil::random_matrix(r, 3, rng);
      const auto terms = hilbert_terms(a, d);
      for (const auto& t : terms) CHECK(t.a.size() == 3);
      double worst = 0.0;
      for (int k = 0; k < 100; ++k) {
        const auto x = testutil::random_vector(3, rng);
        const double target = hilbert_target(a, d, x);
        worst = std::max(worst, std::abs(hilbert_sum(terms, d, x) - target) / target);
      }
      CHECK_MESSAGE(worst <= 1e-8, "d=" << d << " r=" << r);
    }
  }
  // r = 1: |x_1|^{2d}
  const CMatrix e1(1, 2, {1.0, 0.0});
  const auto terms = hilbert_terms(e1, 2);
  const CVector x{cplx(0.3, -0.4), 2.0};
  CHECK(hilbert_sum(terms, 2, x) == doctest::Approx(std::pow(0.5, 4)).epsilon(1e-10));
}

TEST_CASE("square modulus decomposition") {
  std::mt19937_64 rng(4);
  const auto a = testutil::random_vector(2, rng);
  const auto z = sym_power(a, 2);
  const auto terms = square_modulus_decompose(z);
  CHECK(dist(assemble(terms, 2, 2), outer(conj(z), z)) <= 1e-8 * frob_norm(z) * frob_norm(z));
  const CpsTerm single{1.0, a};
  CHECK(dist(assemble(terms, 2, 2), assemble(std::span<const CpsTerm>(&single, 1), 2, 2)) <= 1e-8 * std::pow(norm(a), 4));

  auto e = DenseTensor::zero(2, 2);
  e.set({1, 1}, 1.0);
  e.set({2, 2}, 1.0);
  const auto te = square_modulus_decompose(e);
  CHECK(dist(assemble(te, 2, 2), outer(conj(e), e)) <= 1e-8);

  const auto zr = testutil::random_sym(3, 2, rng);
  const auto tr = square_modulus_decompose(zr);
  const auto w = assemble(tr, 3, 2);
  for (int k = 0; k < 10; ++k) {
    const auto x = testutil::random_vector(3, rng);
    const auto u = tensor_power(x, 2);
    cplx zx{};
    for (std::size_t i = 0; i < u.size(); ++i) zx += zr[i] * u[i];
    const double expect = std::norm(zx);
    CHECK(std::abs(conj_form_eval(w, x) - expect) <= 1e-8 * expect);
  }
  for (const auto& t : tr) CHECK(is_cps(assemble(std::span<const CpsTerm>(&t, 1), 3, 2)));
}

TEST_CASE("CPS decomposition") {
  CHECK(cps_decompose(DenseTensor::zero(2, 4)).empty());

  const auto ex = testutil::gap_tensor();
  const auto terms = cps_decompose(ex);
  CHECK(terms.size() >= 3);
  CHECK(dist(assemble(terms, 2, 2), ex) <= 1e-8 * frob_norm(ex));

  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 3u}) {
    for (int k = 0; k < 3; ++k) {
      const auto t = testutil::random_cps_tensor(n, 2, rng);
      CHECK(relative_residual(cps_decompose(t), t) <= 1e-8);
    }
  }
  // Order 2: Hermitian matrices.
  const auto h = testutil::random_cps_tensor(3, 1, rng);
  CHECK(relative_residual(cps_decompose(h), h) <= 1e-8);

  const auto a = testutil::random_vector(3, rng);
  const CpsTerm one{2.0, a};
  const auto r1 = cps_decompose(assemble(std::span<const CpsTerm>(&one, 1), 3, 2));
  CHECK(r1.size() == 1);

  CHECK_THROWS_AS(cps_decompose(testutil::random_ps(2, 2, rng)), Error);
}

TEST_CASE("PS decomposition and realification") {
  std::mt19937_64 rng(6);
  const auto c = testutil::random_cps_tensor(2, 2, rng);
  for (const auto& t : ps_decompose(c)) CHECK(std::abs(t.lambda.imag()) <= 1e-8);
  for (const auto& t : ps_decompose(cplx(0, 1) * c)) CHECK(std::abs(t.lambda.real()) <= 1e-8);

  const auto p = testutil::random_ps(2, 2, rng);
  const auto pt = ps_decompose(p);
  CHECK(dist(assemble(pt, 2, 2), p) <= 1e-8 * frob_norm(p));
  CHECK_THROWS_AS(ps_decompose(testutil::random_tensor(2, 4, rng)), Error);

  // A PS decomposition of a CPS tensor survives dropping imaginary parts.
  const auto cp = ps_decompose(c);
  CHECK(relative_residual(realify_coefficients(cp, c), c) <= 1e-8);

  const auto a = testutil::random_vector(2, rng);
  const auto b = testutil::random_vector(2, rng);
  const std::vector<PsTerm> mixed{{cplx(1.5, 0), a}, {cplx(0, 2), b}, {cplx(0, -2), b}};
  const CpsTerm target{1.5, a};
  const auto t = assemble(std::span<const CpsTerm>(&target, 1), 2, 2);
  const auto real = realify_coefficients(mixed, t);
  REQUIRE(real.size() == 1);
  CHECK(real[0].lambda == 1.5);

  const std::vector<PsTerm> wrong{{cplx(1, 0), b}};
  CHECK_THROWS_AS(realify_coefficients(wrong, t), Error);
}
