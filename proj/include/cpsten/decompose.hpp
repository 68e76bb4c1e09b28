#pragma once

#include <vector>

#include "cpsten/linalg.hpp"
#include "cpsten/tensor.hpp"

namespace cps {

inline constexpr double tol_decomp = 1e-8;
inline constexpr std::size_t max_symmetric_rank = 6;
inline constexpr std::size_t max_hilbert_terms = 4'000'000;

/// One term sign * conj(Z) (x) Z of the spectral split.
struct SpectralTerm {
  int sign = 1;
  DenseTensor z;
};

/// Eigendecomposition of the standard matricization, each eigenvector folded into a symmetric tensor.
/// Throws NotCps, NonSymmetricEigenvector.
std::vector<SpectralTerm> spectral_split(const DenseTensor& t);

/// Vectors a_k with Z = sum a_k^{(x)d}. Throws NotSymmetric.
std::vector<CVector> symmetric_rank_one_decompose(const DenseTensor& z);

/// Terms (lambda, c) with sum lambda |c^T x|^{2d} = |sum_i (Ax)_i^d|^2 for every x.
/// Throws DegenerateNodes, TermBudgetExceeded.
std::vector<CpsTerm> hilbert_terms(const CMatrix& a, std::size_t d);

/// Rank-one CPS terms assembling to conj(Z) (x) Z.
std::vector<CpsTerm> square_modulus_decompose(const DenseTensor& z);

/// Real-coefficient rank-one CPS terms assembling to t. Throws NotCps.
std::vector<CpsTerm> cps_decompose(const DenseTensor& t);

/// Complex-coefficient terms assembling to a PS tensor. Throws NotPartialSymmetric.
std::vector<PsTerm> ps_decompose(const DenseTensor& t);

/// Drops imaginary parts of coefficients. Throws NotCps, ResidualTooLarge.
std::vector<CpsTerm> realify_coefficients(std::span<const PsTerm> terms, const DenseTensor& t);

/// Unit vectors with fixed phase, parallel terms merged, |lambda| <= drop_below removed.
std::vector<CpsTerm> merge_terms(const std::vector<CpsTerm>& terms, std::size_t d, double drop_below);

/// ||assemble(terms) - t|| / max(||t||, floor)
double relative_residual(std::span<const CpsTerm> terms, const DenseTensor& t);

}  // namespace cps
