#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "cpsten/linalg.hpp"
#include "cpsten/tensor.hpp"

namespace cps {

/// Permutation of {1..2d}, stored 1-based.
class Permutation2d {
 public:
  Permutation2d() = default;
  /// Throws BadPermutation unless `map` is a bijection on {1..m} with m even.
  explicit Permutation2d(std::vector<std::size_t> map);
  /// Comma-separated 1-based list, e.g. "1,3,4,2".
  static Permutation2d parse(std::string_view text);
  static Permutation2d identity(std::size_t order);

  std::size_t order() const noexcept { return map_.size(); }
  std::size_t half() const noexcept { return map_.size() / 2; }
  /// pi_k for 1-based k.
  std::size_t operator()(std::size_t k) const { return map_.at(k - 1); }
  const std::vector<std::size_t>& values() const noexcept { return map_; }
  std::string str() const;

  bool operator==(const Permutation2d&) const = default;

 private:
  std::vector<std::size_t> map_;
};

/// Mode k of the result originates from mode pi_k of t.
DenseTensor pi_transpose(const DenseTensor& t, const Permutation2d& pi);

CVector vectorize(const DenseTensor& t);
DenseTensor devectorize(std::span<const cplx> v, std::size_t n, std::size_t order);

CMatrix matricize(const DenseTensor& t);  // throws OddOrder
CMatrix matricize_pi(const DenseTensor& t, const Permutation2d& pi);
DenseTensor dematricize_pi(const CMatrix& x, const Permutation2d& pi, std::size_t n, std::size_t d);

/// Condition: exactly one of {pi_k, pi_(d+k)} lies in {1..d} for every k.
bool satisfies_conj_condition(const Permutation2d& pi);
/// Condition: floor(d/2) <= |{pi_1..pi_d} cap {1..d}| <= ceil(d/2).
bool satisfies_rank_condition(const Permutation2d& pi);

Permutation2d canonical_pi(std::size_t d);

inline constexpr double rank1_tol = 1e-6;
inline constexpr double extract_tol = 1e-6;

struct RankOneVector {
  CVector x;
  double lambda = 0.0;
};

/// Recovers (x, lambda) with X ~ lambda * M_pi(conj(x)^d (x) x^d).
/// Throws NotRankOne when the modulus ratio exceeds rank1_tol, NotInSubspace when the fit misses extract_tol.
RankOneVector extract_rank_one_vector(const HermMatrix& x, const Permutation2d& pi, std::size_t n, std::size_t d);
/// Same, reusing an eigendecomposition of x.
RankOneVector extract_rank_one_vector(const HermMatrix& x, const HermEigen& eig, const Permutation2d& pi,
                                      std::size_t n, std::size_t d);

/// Largest-modulus entry made real positive; ties go to the lowest index.
void fix_phase(CVector& x);

}  // namespace cps
