#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "cpsten/linalg.hpp"
#include "cpsten/reshape.hpp"
#include "cpsten/tensor.hpp"

namespace cps {

inline constexpr double eig_tol = 1e-6;

/// Data of the matrix relaxations: maximize <C, X> over trace-one X in M_pi(CPS).
struct MatrixModel {
  DenseTensor t;
  std::size_t n = 0;
  std::size_t d = 0;
  Permutation2d pi;
  HermMatrix c;  // conj(M_pi(T))

  // Subspace description: matrix position -> PS orbit id, and the orbit of its conjugate-transpose partner.
  std::vector<std::size_t> orbit;
  std::vector<std::size_t> partner;
  std::vector<double> orbit_size;
  HermMatrix trace_direction;  // P_S(I)
  double trace_direction_norm2 = 0.0;
};

/// Throws NotCps, BadPermutation.
MatrixModel build_matrix_model(const DenseTensor& t, std::optional<Permutation2d> pi = std::nullopt);

/// Orthogonal projection onto M_pi(CPS). Throws SizeMismatch.
HermMatrix project_cps_subspace(const CMatrix& x, const MatrixModel& model);
inline HermMatrix project_cps_subspace(const HermMatrix& x, const MatrixModel& model) {
  return project_cps_subspace(x.matrix(), model);
}

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 10000;
  double sigma = 1.0;
  int adapt_every = 50;
  double divergence_bound = 1e8;
};

enum class SolveStatus { Converged, IterationCapReached, Diverged };
std::string_view to_string(SolveStatus s);

struct SolveReport {
  HermMatrix x;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  double trace_residual = 0.0;
  double subspace_residual = 0.0;
  double min_eigenvalue = 0.0;
  double rank_one_ratio = 1.0;
  std::optional<EigenPair> eigenpair;
  double eigen_residual = 0.0;
  bool certified = false;
};

/// ADMM on the semidefinite relaxation.
SolveReport solve_sdp(const MatrixModel& model, const SolverOptions& opts = {});
/// ADMM on the nuclear-norm penalty model; rho > 0.
/// The model is unbounded when rho < (lambda_max(C) - lambda_min(C)) / 2; the run then ends Diverged.
SolveReport solve_nuclear(const MatrixModel& model, double rho, const SolverOptions& opts = {});

/// ||C||_F, which always keeps the nuclear model bounded.
double default_nuclear_rho(const MatrixModel& model);

/// Fills rank_one_ratio, eigenpair, eigen_residual and certified from report.x.
void certify_and_recover(SolveReport& report, const MatrixModel& model);

/// ||partial_map(T, x) - lambda x||. Throws NotUnit.
double eigen_residual(const DenseTensor& t, const EigenPair& pair);
/// ||T - lambda x^d (x) conj(x)^d||, the term whose conjugate form peaks at x. Throws NotUnit.
double best_rank_one_error(const DenseTensor& t, const EigenPair& pair);

/// Grid search over unit x in C^2 modulo global phase, then a local polish. Throws UnsupportedDimension.
EigenPair brute_force_max_eig(const DenseTensor& t, int grid = 2000);

/// Ascent on x -> T(conj(x)^d x^d) from x0 by shifted power steps; returns the refined pair.
EigenPair polish_eigenpair(const DenseTensor& t, CVector x0, int max_steps = 2000);

}  // namespace cps
