#include "cpsten/reshape.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace cps {

Permutation2d::Permutation2d(std::vector<std::size_t> map) : map_(std::move(map)) {
  const std::size_t m = map_.size();
  if (m == 0 || m % 2 != 0) throw Error(ErrorCode::BadPermutation, "length must be even and positive");
  std::vector<bool> seen(m + 1, false);
  for (std::size_t v : map_) {
    if (v < 1 || v > m || seen[v]) throw Error(ErrorCode::BadPermutation, "not a bijection on 1.." + std::to_string(m));
    seen[v] = true;
  }
}

Permutation2d Permutation2d::parse(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    auto field = text.substr(pos, comma - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
      throw Error(ErrorCode::BadPermutation, "cannot parse '" + std::string(text) + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return Permutation2d(std::move(out));
}

Permutation2d Permutation2d::identity(std::size_t order) {
  std::vector<std::size_t> m(order);
  for (std::size_t k = 0; k < order; ++k) m[k] = k + 1;
  return Permutation2d(std::move(m));
}

std::string Permutation2d::str() const {
  std::string s;
  for (std::size_t k = 0; k < map_.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(map_[k]);
  }
  return s;
}

namespace {

// out[k] = offset in t^pi of the entry stored at offset k of t.
std::vector<std::size_t> transpose_map(std::size_t n, const Permutation2d& pi) {
  const std::size_t m = pi.order();
  const std::size_t total = ipow(n, m);
  std::vector<std::size_t> out(total);
  for (std::size_t off = 0; off < total; ++off) {
    const auto i = digits(off, n, m);
    std::size_t j = 0;
    for (std::size_t k = 1; k <= m; ++k) j = j * n + i[pi(k) - 1];
    out[off] = j;
  }
  return out;
}

}  // namespace

DenseTensor pi_transpose(const DenseTensor& t, const Permutation2d& pi) {
  if (t.order() != pi.order()) throw Error(ErrorCode::OrderMismatch, "permutation length differs from tensor order");
  const auto map = transpose_map(t.dim(), pi);
  std::vector<cplx> out(t.size());
  for (std::size_t off = 0; off < t.size(); ++off) out[map[off]] = t[off];
  return DenseTensor::from_entries(t.dim(), t.order(), std::move(out));
}

CVector vectorize(const DenseTensor& t) { return CVector(t.data().begin(), t.data().end()); }

DenseTensor devectorize(std::span<const cplx> v, std::size_t n, std::size_t order) {
  return DenseTensor::from_entries(n, order, CVector(v.begin(), v.end()));
}

CMatrix matricize(const DenseTensor& t) {
  if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "matricization needs even order");
  const std::size_t hs = ipow(t.dim(), t.order() / 2);
  return CMatrix(hs, hs, vectorize(t));
}

CMatrix matricize_pi(const DenseTensor& t, const Permutation2d& pi) { return matricize(pi_transpose(t, pi)); }

DenseTensor dematricize_pi(const CMatrix& x, const Permutation2d& pi, std::size_t n, std::size_t d) {
  const std::size_t hs = ipow(n, d);
  if (x.rows() != hs || x.cols() != hs) throw Error(ErrorCode::SizeMismatch, "matrix is not n^d x n^d");
  if (pi.order() != 2 * d) throw Error(ErrorCode::OrderMismatch, "permutation length differs from 2d");
  const auto map = transpose_map(n, pi);
  const auto src = x.data();
  std::vector<cplx> out(src.size());
  for (std::size_t off = 0; off < out.size(); ++off) out[off] = src[map[off]];
  return DenseTensor::from_entries(n, 2 * d, std::move(out));
}

bool satisfies_conj_condition(const Permutation2d& pi) {
  const std::size_t d = pi.half();
  for (std::size_t k = 1; k <= d; ++k) {
    const int hits = int(pi(k) <= d) + int(pi(d + k) <= d);
    if (hits != 1) return false;
  }
  return true;
}

bool satisfies_rank_condition(const Permutation2d& pi) {
  const std::size_t d = pi.half();
  std::size_t count = 0;
  for (std::size_t k = 1; k <= d; ++k) count += pi(k) <= d;
  return d / 2 <= count && count <= (d + 1) / 2;
}

Permutation2d canonical_pi(std::size_t d) {
  if (d == 0) throw Error(ErrorCode::RangeError, "d must be positive");
  const std::size_t c = (d + 1) / 2;
  const std::size_t f = d / 2;
  std::vector<std::size_t> m;
  for (std::size_t k = 1; k <= c; ++k) m.push_back(k);
  for (std::size_t k = d + 1; k <= d + f; ++k) m.push_back(k);
  for (std::size_t k = d + f + 1; k <= 2 * d; ++k) m.push_back(k);
  for (std::size_t k = c + 1; k <= d; ++k) m.push_back(k);
  return Permutation2d(std::move(m));
}

void fix_phase(CVector& x) {
  double best = 0.0;
  for (const auto& z : x) best = std::max(best, std::abs(z));
  if (best == 0.0) return;
  std::size_t k = 0;
  while (std::abs(x[k]) < best * (1.0 - 1e-9)) ++k;
  const cplx rot = std::conj(x[k]) / std::abs(x[k]);
  for (auto& z : x) z *= rot;
  x[k] = std::abs(x[k]);
}

RankOneVector extract_rank_one_vector(const HermMatrix& x, const Permutation2d& pi, std::size_t n, std::size_t d) {
  return extract_rank_one_vector(x, herm_eig(x), pi, n, d);
}

RankOneVector extract_rank_one_vector(const HermMatrix& x, const HermEigen& eig, const Permutation2d& pi,
                                      std::size_t n, std::size_t d) {
  const double ratio = top_singular_ratio(eig);
  if (ratio > rank1_tol) throw Error(ErrorCode::NotRankOne, "modulus ratio " + std::to_string(ratio));

  const std::size_t dim = eig.values.size();
  const std::size_t top = std::abs(eig.values.front()) >= std::abs(eig.values.back()) ? 0 : dim - 1;
  const double mu = eig.values[top];
  CMatrix r(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) r(i, j) = mu * eig.vectors(i, top) * std::conj(eig.vectors(j, top));
  const DenseTensor t = dematricize_pi(r, pi, n, d);

  // Diagonal entries are lambda |x_k|^{2d}; the row (k..k, k..k i) is proportional to x_i.
  const std::size_t hs = ipow(n, d);
  auto repeated = [&](std::size_t k, std::size_t len) {
    std::size_t off = 0;
    for (std::size_t m = 0; m < len; ++m) off = off * n + k;
    return off;
  };
  std::size_t kref = 0;
  double dmax = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = std::abs(t[repeated(k, d) * hs + repeated(k, d)]);
    if (v > dmax) {
      dmax = v;
      kref = k;
    }
  }
  CVector v(n);
  const std::size_t row = repeated(kref, d) * hs + repeated(kref, d - 1) * n;
  for (std::size_t i = 0; i < n; ++i) v[i] = t[row + i];
  const double nv = norm(v);
  if (nv == 0.0) throw Error(ErrorCode::NotInSubspace, "reference row vanishes");
  for (auto& z : v) z /= nv;
  fix_phase(v);

  // The conjugate form of conj(v)^d (x) v^d peaks at conj(v), not at v.
  RankOneVector out{v, conj_form_eval(t, conj_copy(v)).real()};
  const CpsTerm term{out.lambda, v};
  const CMatrix fit = matricize_pi(assemble(std::span<const CpsTerm>(&term, 1), n, d), pi);
  const double miss = frob_norm(x.matrix() - fit);
  if (miss > extract_tol * frob_norm(x.matrix())) {
    throw Error(ErrorCode::NotInSubspace, "rank-one fit misses by " + std::to_string(miss));
  }
  return out;
}

}  // namespace cps
