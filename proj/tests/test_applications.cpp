#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "cpsten/applications.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cps;
using testutil::phase_dist;

namespace {

cplx bilinear(const CVector& s, const CMatrix& b) {
  cplx v{};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) v += std::conj(s[i]) * b(i, j) * s[j];
  return v;
}

// phi(s) - rho |s^H s0|^2 ||s||^2 from the waveform model, written out term by term.
double radar_direct(const RadarScenario& sc, const CVector& s) {
  const std::size_t n = sc.n;
  double phi = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 1; j <= sc.m; ++j) {
      double w = 0.0;
      for (const auto& p : sc.patches)
        if (p.r == r && std::find(p.delta.begin(), p.delta.end(), j) != p.delta.end())
          w += p.sigma2 / double(p.delta.size());
      if (w == 0.0) continue;
      const double x = double(j - 1) / double(sc.m);
      // (J^r (s . p))_i = s_{i-r} p_{i-r}
      cplx v{};
      for (std::size_t i = r; i < n; ++i) {
        const std::size_t k = i - r;
        v += std::conj(s[i]) * s[k] * std::exp(cplx(0.0, 2.0 * std::numbers::pi * double(k) * x));
      }
      phi += w * std::norm(v);
    }
  }
  cplx ip{};
  for (std::size_t i = 0; i < n; ++i) ip += std::conj(s[i]) * sc.s0[i];
  return phi - sc.rho * std::norm(ip) * std::pow(norm(s), 2);
}

DenseTensor z_two_by_three(double z111, double z112, double z122, double z222) {
  auto z = DenseTensor::zero(2, 3);
  z.set({1, 1, 1}, z111);
  for (auto idx : {std::array<std::size_t, 3>{1, 1, 2}, {1, 2, 1}, {2, 1, 1}}) z.set(idx, z112);
  for (auto idx : {std::array<std::size_t, 3>{1, 2, 2}, {2, 1, 2}, {2, 2, 1}}) z.set(idx, z122);
  z.set({2, 2, 2}, z222);
  return z;
}

}  // namespace

TEST_CASE("shift matrix") {
  CHECK(testutil::dist(shift_matrix(4, 0), CMatrix::identity(4)) == 0.0);
  const auto j = shift_matrix(3, 1);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(j(r, c) == cplx((r == 1 && c == 0) || (r == 2 && c == 1) ? 1.0 : 0.0));
  const CVector v{1.0, 2.0, 3.0};
  const CVector jv = j * std::span<const cplx>(v);
  CHECK(jv[0] == cplx(0.0));
  CHECK(jv[1] == v[0]);
  CHECK(jv[2] == v[1]);
  int nz = 0;
  const auto last = shift_matrix(5, 4);
  for (auto z : last.data()) nz += z != cplx{};
  CHECK(nz == 1);
  CHECK_THROWS_WITH_AS(shift_matrix(3, 3), doctest::Contains("RangeError"), Error);
}

TEST_CASE("steering vector") {
  const auto ones = steering(5, 0.0);
  for (auto z : ones) CHECK(z == cplx(1.0));
  const auto p = steering(4, 0.5);
  const double expect[] = {1, -1, 1, -1};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(p[k] - expect[k]) < 1e-15);
  const auto q = steering(7, 0.37);
  for (auto z : q) CHECK(std::abs(z) == doctest::Approx(1.0));
}

TEST_CASE("tensor from sesquilinear forms") {
  std::mt19937_64 rng(17);
  {
    const SesquiForm id{1.0, CMatrix::identity(3)};
    const auto t = cps_from_sesqui_forms(std::span<const SesquiForm>(&id, 1), 3);
    for (int k = 0; k < 10; ++k) CHECK(conj_form_eval(t, testutil::random_unit(3, rng)).real() == doctest::Approx(1.0));
  }
  std::vector<SesquiForm> forms;
  for (double w : {0.7, -1.3, 2.0}) forms.push_back({w, testutil::random_matrix(3, 3, rng)});
  const auto t = cps_from_sesqui_forms(forms, 3);
  CHECK(is_cps(t));
  for (int k = 0; k < 100; ++k) {
    const auto s = testutil::random_vector(3, rng);
    double direct = 0.0;
    for (const auto& f : forms) direct += f.w * std::norm(bilinear(s, f.b));
    const cplx got = conj_form_eval(t, s);
    CHECK(std::abs(got - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
  }
  const SesquiForm bad{1.0, CMatrix(2, 3)};
  CHECK_THROWS_AS(cps_from_sesqui_forms(std::span<const SesquiForm>(&bad, 1), 3), Error);
}

TEST_CASE("radar tensor") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {3, 5}) {
    const auto sc = default_scenario(n, 9);
    for (auto z : sc.s0) CHECK(std::abs(z) == doctest::Approx(1.0 / std::sqrt(double(n))));
    const auto t = radar_tensor(sc);
    CHECK(is_cps(t));
    for (int k = 0; k < 100; ++k) {
      const auto s = testutil::random_unit(n, rng);
      const double direct = radar_direct(sc, s);
      CHECK(std::abs(conj_form_eval(t, s) - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }

  RadarScenario one = default_scenario(4, 1);
  one.rho = 0.0;
  one.patches = {{2, {1, 3}, 0.5}};
  const auto t = radar_tensor(one);
  for (int k = 0; k < 50; ++k) {
    const auto s = testutil::random_unit(4, rng);
    const double v = conj_form_eval(t, s).real();
    CHECK(v >= -1e-12);
    CHECK(v == doctest::Approx(radar_direct(one, s)).epsilon(1e-10));
  }

  RadarScenario bad = default_scenario(4, 1);
  bad.patches[0].delta.push_back(9);
  CHECK_THROWS_WITH_AS(radar_tensor(bad), doctest::Contains("RangeError"), Error);
}

TEST_CASE("radar relaxation certifies at n = 5") {
  const auto t = radar_tensor(default_scenario(5, 3));
  const auto r = solve_sdp(build_matrix_model(-1.0 * t));
  CHECK(r.certified);
}

TEST_CASE("random CPS generator") {
  CHECK(is_cps(random_cps(3, 1)));
  CHECK(is_cps(random_cps(2, 4, 3)));
  CHECK(testutil::dist(random_cps(3, 42), random_cps(3, 42)) == 0.0);
  CHECK(testutil::dist(random_cps(3, 42), random_cps(3, 43)) > 0.1);

  // Entry (1,2,3,4) at n = 4 averages 8 independent entries of variance 1 per part, so its
  // real and imaginary parts have variance 1/8 and the modulus is Rayleigh.
  const double sigma = std::sqrt(1.0 / 8.0);
  const double mean = sigma * std::sqrt(std::numbers::pi / 2.0);
  const double sd = sigma * std::sqrt((4.0 - std::numbers::pi) / 2.0);
  double sum = 0.0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) sum += std::abs(random_cps(4, std::uint64_t(s)).entry({1, 2, 3, 4}));
  CHECK(std::abs(sum / seeds - mean) <= 3.0 * sd / std::sqrt(double(seeds)));
}

TEST_CASE("US lift") {
  std::mt19937_64 rng(71);
  for (std::size_t n : {2, 3})
    for (std::size_t d : {2, 3}) {
      const auto z = testutil::random_sym(n, d, rng);
      const auto w = us_lift(z);
      CHECK(is_cps(w));
      for (int k = 0; k < 100; ++k) {
        const auto x = testutil::random_unit(n, rng);
        const CVector u = tensor_power(x, d);
        cplx ip{};
        for (std::size_t i = 0; i < u.size(); ++i) ip += std::conj(z[i]) * u[i];
        CHECK(std::abs(conj_form_eval(w, x) - std::norm(ip)) <= 1e-10 * std::max(1.0, std::norm(ip)));
      }
    }

  const auto a = testutil::random_vector(2, rng);
  const auto za = DenseTensor::from_entries(2, 3, tensor_power(a, 3));
  CHECK(testutil::dist(us_lift(za), testutil::rank_one_cps(1.0, testutil::conj_vec(a), 3)) < 1e-12);

  CHECK_THROWS_WITH_AS(us_lift(testutil::random_tensor(2, 3, rng)), doctest::Contains("NotSymmetric"), Error);
}

TEST_CASE("largest US-eigenvalue, first example") {
  const auto z = z_two_by_three(2, 1, -1, 1);
  const auto r = us_eigen(z);
  CHECK(r.lambda == doctest::Approx(2.3547).epsilon(1e-3 / 2.3547));
  CHECK(phase_dist(r.z, {0.9726, 0.2326}) < 1e-3);
  const cplx p = us_pairing(z, r.z);
  CHECK(std::abs(p.imag()) <= 1e-9);
  CHECK(p.real() >= 0.0);
  CHECK(std::abs(r.lambda * r.lambda - r.report.objective) <= 1e-9);

  const auto same = perturb_and_retry(z, 0.0, 5, 11);
  CHECK(same.log.size() == 1);
  CHECK(same.lambda == r.lambda);
  CHECK(phase_dist(same.z, r.z) == 0.0);

  // Eigenvalue continuity under a perturbation of size 1e-4.
  const auto moved = us_eigen(z + random_symmetric(2, 3, 5, 1e-4));
  CHECK(std::abs(moved.lambda - r.lambda) <= 10.0 * 1e-4);
}

TEST_CASE("largest US-eigenvalue of a unit rank-one tensor") {
  std::mt19937_64 rng(91);
  const auto a = testutil::random_unit(3, rng);
  const auto z = DenseTensor::from_entries(3, 3, tensor_power(a, 3));
  const auto r = us_eigen(z);
  CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(us_pairing(z, r.z)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("perturbation restarts, second example") {
  const auto z = z_two_by_three(2, -1, -2, 1);
  CHECK_THROWS_WITH_AS(us_eigen(z), doctest::Contains("Uncertified"), Error);
  CHECK_THROWS_WITH_AS(perturb_and_retry(z, 1e-4, 0, 1), doctest::Contains("Uncertified"), Error);

  const std::array<CVector, 4> published{
      CVector{cplx(0.6987, 0.1088), cplx(-0.1088, 0.6987)}, CVector{cplx(0.6987, -0.1088), cplx(-0.1088, -0.6987)},
      CVector{cplx(-0.2551, 0.6595), cplx(0.6595, 0.2551)}, CVector{cplx(-0.2551, -0.6595), cplx(0.6595, -0.2551)}};
  for (std::uint64_t seed : {1, 2}) {
    const auto r = perturb_and_retry(z, 1e-4, 5, seed);
    CHECK(r.log.size() >= 2);
    CHECK(r.log.size() <= 6);
    CHECK_FALSE(r.log.front().certified);
    CHECK(r.log.back().certified);
    CHECK(r.lambda == doctest::Approx(3.1623).epsilon(1e-3 / 3.1623));
    double best = 1e9;
    for (const auto& v : published) best = std::min(best, phase_dist(r.z, v));
    CHECK(best <= 2e-3);
  }
}
