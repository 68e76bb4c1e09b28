#include "cpsten/applications.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace cps {

CMatrix shift_matrix(std::size_t n, std::size_t r) {
  if (r >= n) throw Error(ErrorCode::RangeError, "shift " + std::to_string(r) + " outside 0.." + std::to_string(n - 1));
  CMatrix j(n, n);
  for (std::size_t i = r; i < n; ++i) j(i, i - r) = 1.0;
  return j;
}

CVector steering(std::size_t n, double v) {
  CVector p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = std::polar(1.0, 2.0 * std::numbers::pi * double(k) * v);
  return p;
}

DenseTensor cps_from_sesqui_forms(std::span<const SesquiForm> forms, std::size_t n) {
  DenseTensor raw = DenseTensor::zero(n, 4);
  const std::size_t n2 = n * n, n3 = n2 * n;
  for (const auto& f : forms) {
    if (f.b.rows() != n || f.b.cols() != n) throw Error(ErrorCode::SizeMismatch, "form matrix must be n x n");
    // R_{i l j k} += w B_ij conj(B_kl)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const cplx bij = f.w * f.b(i, j);
        if (bij == cplx{}) continue;
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) raw[i * n3 + l * n2 + j * n + k] += bij * std::conj(f.b(k, l));
      }
  }
  return hermitian_part(symmetrize_ps(raw));
}

CVector random_code(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  CVector s(n);
  for (auto& z : s) z = std::polar(1.0 / std::sqrt(double(n)), phase(rng));
  return s;
}

RadarScenario default_scenario(std::size_t n, std::uint64_t s0_seed) {
  if (n < 2) throw Error(ErrorCode::RangeError, "radar code length must be at least 2");
  RadarScenario sc;
  sc.n = n;
  sc.m = n;
  const std::size_t half = (sc.m + 1) / 2;
  ClutterPatch a{0, {}, 1.0}, b{1, {}, 1.0};
  for (std::size_t j = 1; j <= sc.m; ++j) (j <= half ? a : b).delta.push_back(j);
  sc.patches = {a, b};
  sc.rho = 30.0;
  sc.s0 = random_code(n, s0_seed);
  return sc;
}

void validate_scenario(const RadarScenario& sc) {
  if (sc.n < 1 || sc.m < 1) throw Error(ErrorCode::RangeError, "scenario needs n, m >= 1");
  if (!(sc.rho >= 0.0)) throw Error(ErrorCode::RangeError, "similarity weight must be nonnegative");
  if (sc.s0.size() != sc.n) throw Error(ErrorCode::SizeMismatch, "reference code length differs from n");
  for (const auto& p : sc.patches) {
    if (p.r >= sc.n) throw Error(ErrorCode::RangeError, "range bin outside 0..n-1");
    if (!(p.sigma2 > 0.0)) throw Error(ErrorCode::RangeError, "patch power must be positive");
    if (p.delta.empty()) throw Error(ErrorCode::RangeError, "empty frequency set");
    for (std::size_t j : p.delta)
      if (j < 1 || j > sc.m) throw Error(ErrorCode::RangeError, "frequency index outside 1..m");
  }
}

double clutter_weight(const RadarScenario& sc, std::size_t r, std::size_t j) {
  double w = 0.0;
  for (const auto& p : sc.patches) {
    if (p.r != r) continue;
    for (std::size_t k : p.delta)
      if (k == j) w += p.sigma2 / double(p.delta.size());
  }
  return w;
}

DenseTensor radar_tensor(const RadarScenario& sc) {
  validate_scenario(sc);
  const std::size_t n = sc.n;
  std::vector<SesquiForm> forms;
  for (std::size_t r = 0; r < n; ++r) {
    const CMatrix shift = shift_matrix(n, r);
    for (std::size_t j = 1; j <= sc.m; ++j) {
      const double w = clutter_weight(sc, r, j);
      if (w <= 0.0) continue;
      const CVector p = steering(n, double(j - 1) / double(sc.m));
      CMatrix b(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) b(i, k) = shift(i, k) * p[k];
      forms.push_back({w, std::move(b)});
    }
  }
  if (sc.rho > 0.0) {
    for (std::size_t t = 0; t < n; ++t) {
      CMatrix b(n, n);
      for (std::size_t i = 0; i < n; ++i) b(i, t) = sc.s0[i];
      forms.push_back({-sc.rho, std::move(b)});
    }
  }
  return cps_from_sesqui_forms(forms, n);
}

namespace {

DenseTensor gaussian_tensor(std::size_t n, std::size_t order, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> w(ipow(n, order));
  for (auto& z : w) {
    const double re = g(rng);
    z = cplx(re, g(rng));
  }
  return DenseTensor::from_entries(n, order, std::move(w));
}

}  // namespace

DenseTensor random_cps(std::size_t n, std::uint64_t seed, std::size_t d) {
  if (n < 1 || d < 1) throw Error(ErrorCode::RangeError, "random tensor needs n, d >= 1");
  std::mt19937_64 rng(seed);
  return hermitian_part(symmetrize_ps(gaussian_tensor(n, 2 * d, rng)));
}

DenseTensor random_symmetric(std::size_t n, std::size_t d, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  DenseTensor e = symmetrize(gaussian_tensor(n, d, rng));
  const double nrm = frob_norm(e);
  if (nrm > 0.0) e *= scale / nrm;
  return e;
}

DenseTensor us_lift(const DenseTensor& z) {
  if (!is_symmetric(z)) throw Error(ErrorCode::NotSymmetric, "US lift needs a symmetric tensor");
  return outer(z, conj(z));
}

cplx us_pairing(const DenseTensor& z, std::span<const cplx> x) {
  if (x.size() != z.dim()) throw Error(ErrorCode::SizeMismatch, "vector length differs from tensor dimension");
  const CVector u = tensor_power(x, z.order());
  cplx s{};
  for (std::size_t k = 0; k < u.size(); ++k) s += std::conj(z[k]) * u[k];
  return s;
}

namespace {

// z = e^{-i theta/d} x with theta = arg <Z, x^d>, so that <Z, z^d> >= 0.
CVector rotate_to_real(const DenseTensor& z, const CVector& x) {
  const double theta = std::arg(us_pairing(z, x));
  const cplx rot = std::polar(1.0, -theta / double(z.order()));
  CVector out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = rot * x[k];
  return out;
}

}  // namespace

UsResult us_eigen(const DenseTensor& z, const SolverOptions& opts) {
  const MatrixModel model = build_matrix_model(us_lift(z));
  UsResult res;
  res.report = solve_sdp(model, opts);
  if (!res.report.certified) {
    throw Error(ErrorCode::Uncertified, "relaxation returned a solution of rank-one ratio " +
                                            std::to_string(res.report.rank_one_ratio));
  }
  res.z = rotate_to_real(z, res.report.eigenpair->x);
  res.lambda = std::sqrt(std::max(res.report.objective, 0.0));
  return res;
}

RetryResult perturb_and_retry(const DenseTensor& z, double eps, int attempts, std::uint64_t seed,
                              const SolverOptions& opts) {
  if (eps < 0.0) throw Error(ErrorCode::RangeError, "perturbation size must be nonnegative");
  const DenseTensor lift = us_lift(z);
  RetryResult res;
  const int total = eps > 0.0 ? attempts : 0;
  for (int k = 0; k <= total; ++k) {
    const std::uint64_t s = seed + std::uint64_t(k);
    const DenseTensor zk = k == 0 ? z : z + random_symmetric(z.dim(), z.order(), s, eps);
    const MatrixModel model = build_matrix_model(us_lift(zk));
    SolveReport rep = solve_sdp(model, opts);
    res.log.push_back({k, k == 0 ? 0 : s, rep.certified, rep.objective, rep.iterations});
    if (!rep.certified) continue;
    if (k == 0) {
      res.z = rotate_to_real(z, rep.eigenpair->x);
      res.lambda = std::sqrt(std::max(rep.objective, 0.0));
    } else {
      const EigenPair refined = polish_eigenpair(lift, rep.eigenpair->x);
      res.z = rotate_to_real(z, refined.x);
      res.lambda = std::abs(us_pairing(z, res.z));
    }
    res.report = std::move(rep);
    return res;
  }
  throw Error(ErrorCode::Uncertified, "no rank-one solution after " + std::to_string(total) + " perturbed attempts");
}

}  // namespace cps
