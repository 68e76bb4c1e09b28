#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpsten/rank_one.hpp"

namespace cps {

/// Down-shift: (J^r)_{ij} = 1 iff i - j = r. Throws RangeError unless r < n.
CMatrix shift_matrix(std::size_t n, std::size_t r);

/// (1, e^{i 2 pi v}, ..., e^{i 2 pi (n-1) v})
CVector steering(std::size_t n, double v);

/// w * |conj(s)^T B s|^2
struct SesquiForm {
  double w = 0.0;
  CMatrix b;
};

/// Order-4 CPS tensor whose conjugate form is sum_t w_t |conj(s)^T B_t s|^2. Throws SizeMismatch.
DenseTensor cps_from_sesqui_forms(std::span<const SesquiForm> forms, std::size_t n);

struct ClutterPatch {
  std::size_t r = 0;                // range bin, 0..n-1
  std::vector<std::size_t> delta;   // frequency indices, 1..m
  double sigma2 = 1.0;
};

struct RadarScenario {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<ClutterPatch> patches;
  double rho = 30.0;
  CVector s0;  // unit modulus entries scaled to ||s0|| = 1
};

/// Unit-modulus code with uniform random phases, normalized.
CVector random_code(std::size_t n, std::uint64_t seed);

/// Two patches at bins 0 and 1 splitting the m = n frequencies in half, unit powers, rho = 30.
RadarScenario default_scenario(std::size_t n, std::uint64_t s0_seed);

/// Throws RangeError on an invalid scenario.
void validate_scenario(const RadarScenario& sc);

/// Clutter weight rho(r, j) for 0-based bin r and 1-based frequency j.
double clutter_weight(const RadarScenario& sc, std::size_t r, std::size_t j);

/// T with T(conj(s)^2 s^2) = phi(s) - rho |s^H s0|^2 ||s||^2. Waveform design minimizes this form.
DenseTensor radar_tensor(const RadarScenario& sc);

/// Hermitian part of the PS-symmetrized complex Gaussian tensor of order 2d.
DenseTensor random_cps(std::size_t n, std::uint64_t seed, std::size_t d = 2);

/// Symmetric complex Gaussian tensor of order d scaled to Frobenius norm `scale`.
DenseTensor random_symmetric(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0);

/// Z (x) conj(Z), with conjugate form |<Z, x^d>|^2. Throws NotSymmetric.
DenseTensor us_lift(const DenseTensor& z);

/// <Z, x^d> = sum conj(Z_I) x^I
cplx us_pairing(const DenseTensor& z, std::span<const cplx> x);

struct UsResult {
  double lambda = 0.0;
  CVector z;
  SolveReport report;
};

/// Largest US-eigenvalue through the SDP on us_lift(Z). Throws Uncertified.
UsResult us_eigen(const DenseTensor& z, const SolverOptions& opts = {});

struct AttemptRecord {
  int attempt = 0;  // 0 is the unperturbed solve
  std::uint64_t seed = 0;
  bool certified = false;
  double objective = 0.0;
  int iterations = 0;
};

struct RetryResult : UsResult {
  std::vector<AttemptRecord> log;
};

/// Solves Z first, then Z + E_k for k = 1..attempts with ||E_k|| = eps drawn from seed + k.
/// A certified perturbed vector is polished against the unperturbed lift. Throws Uncertified.
RetryResult perturb_and_retry(const DenseTensor& z, double eps, int attempts, std::uint64_t seed,
                              const SolverOptions& opts = {});

}  // namespace cps
