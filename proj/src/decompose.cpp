#include "cpsten/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "cpsten/reshape.hpp"

namespace cps {

namespace {

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t m = 2; m <= k; ++m) f *= double(m);
  return f;
}

DenseTensor assemble_symmetric(const std::vector<CVector>& vecs, std::size_t n, std::size_t d) {
  DenseTensor out = DenseTensor::zero(n, d);
  for (const auto& a : vecs) {
    const CVector u = tensor_power(a, d);
    for (std::size_t k = 0; k < u.size(); ++k) out[k] += u[k];
  }
  return out;
}

// Wedderburn rank reduction for complex symmetric matrices: Z <- Z - (Zu)(Zu)^T / (u^T Z u).
std::vector<CVector> symmetric_matrix_terms(const DenseTensor& z) {
  const std::size_t n = z.dim();
  CMatrix m(n, n, CVector(z.data().begin(), z.data().end()));
  const double scale = frob_norm(m);
  std::vector<CVector> out;
  for (std::size_t step = 0; step < n && frob_norm(m) > 1e-13 * scale; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        // u = e_i (j == i) or e_i + e_j; |u^T Z u| / ||u||^2
        const cplx q = i == j ? m(i, i) : m(i, i) + m(j, j) + 2.0 * m(i, j);
        const double v = std::abs(q) / (i == j ? 1.0 : 2.0);
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    CVector zu(n);
    for (std::size_t r = 0; r < n; ++r) zu[r] = m(r, bi) + (bi == bj ? cplx{} : m(r, bj));
    const cplx q = bi == bj ? zu[bi] : zu[bi] + zu[bj];
    const cplx s = std::sqrt(q);
    for (auto& v : zu) v /= s;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) -= zu[r] * zu[c];
    out.push_back(std::move(zu));
  }
  return out;
}

// Z = a^{(x)d} read off the fiber through the largest diagonal entry; empty when Z is not a pure power.
std::vector<CVector> pure_power_term(const DenseTensor& z) {
  const std::size_t n = z.dim();
  const std::size_t d = z.order();
  auto repeated = [&](std::size_t k, std::size_t len) {
    std::size_t off = 0;
    for (std::size_t m = 0; m < len; ++m) off = off * n + k;
    return off;
  };
  std::size_t kref = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(z[repeated(k, d)]) > std::abs(z[repeated(kref, d)])) kref = k;
  const cplx diag = z[repeated(kref, d)];
  if (diag == cplx{}) return {};
  const cplx ak = std::pow(diag, 1.0 / double(d));
  const cplx scale = std::pow(ak, double(d - 1));
  CVector a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = z[repeated(kref, d - 1) * n + i] / scale;
  std::vector<CVector> out{a};
  if (frob_norm(assemble_symmetric(out, n, d) - z) > 1e-12 * frob_norm(z)) return {};
  return out;
}

// Polarization over the symmetrized basis; integer directions merged exactly.
std::vector<CVector> polarization_terms(const DenseTensor& z) {
  const std::size_t n = z.dim();
  const std::size_t d = z.order();
  std::map<std::vector<long>, cplx> acc;
  const double half_signs = std::ldexp(1.0, int(d) - 1);
  for (std::size_t off = 0; off < z.size(); ++off) {
    const cplx val = z[off];
    if (val == cplx{}) continue;
    const auto idx = digits(off, n, d);
    if (!std::is_sorted(idx.begin(), idx.end())) continue;
    double mult = 1.0;
    for (std::size_t k = 0, run = 1; k < d; ++k, ++run) {
      if (k + 1 == d || idx[k + 1] != idx[k]) {
        mult *= factorial(run);
        run = 0;
      }
    }
    for (std::size_t mask = 0; mask < (std::size_t(1) << (d - 1)); ++mask) {
      std::vector<long> v(n, 0);
      double sign = 1.0;
      v[idx[0]] += 1;
      for (std::size_t k = 1; k < d; ++k) {
        const long e = (mask >> (k - 1)) & 1 ? -1 : 1;
        v[idx[k]] += e;
        sign *= double(e);
      }
      auto first = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
      if (first == v.end()) continue;
      cplx c = val * sign / (half_signs * mult);
      if (*first < 0) {
        for (auto& x : v) x = -x;
        if (d % 2 == 1) c = -c;
      }
      long g = 0;
      for (long x : v) g = std::gcd(g, std::abs(x));
      for (auto& x : v) x /= g;
      c *= std::pow(double(g), double(d));
      acc[v] += c;
    }
  }
  std::vector<CVector> out;
  for (const auto& [v, c] : acc) {
    if (c == cplx{}) continue;
    const cplx root = std::pow(c, 1.0 / double(d));
    CVector a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = root * double(v[k]);
    out.push_back(std::move(a));
  }
  return out;
}

CVector vandermonde_solve(const std::vector<double>& nodes, const std::vector<double>& rhs) {
  for (std::size_t p = 0; p < nodes.size(); ++p)
    for (std::size_t q = p + 1; q < nodes.size(); ++q)
      if (nodes[p] == nodes[q]) throw Error(ErrorCode::DegenerateNodes, "repeated Vandermonde node");
  const std::size_t m = nodes.size();
  CMatrix v(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) v(j, k) = std::pow(nodes[k], double(j));
  const CVector b(rhs.begin(), rhs.end());
  return solve_linear(v, b);
}

// Enumerates (k_l, m_l) over {0..K-1} x {0..R-1} for l = 1..r, emitting A^T b with
// b_l = node[k_l] * exp(2 pi i m_l / R) and coefficient scale * prod weight[k_l].
void emit_family(const CMatrix& a, const std::vector<double>& node, const CVector& weight, std::size_t roots,
                 double scale, std::vector<CpsTerm>& out) {
  const std::size_t r = a.rows();
  const std::size_t n = a.cols();
  const std::size_t radix = node.size() * roots;
  std::vector<cplx> unity(roots);
  for (std::size_t m = 0; m < roots; ++m) unity[m] = std::polar(1.0, 2.0 * std::numbers::pi * double(m) / double(roots));
  std::vector<std::size_t> counter(r, 0);
  const std::size_t total = ipow(radix, r);
  for (std::size_t it = 0; it < total; ++it) {
    double coeff = scale;
    CVector c(n);
    for (std::size_t l = 0; l < r; ++l) {
      const std::size_t k = counter[l] / roots;
      const std::size_t m = counter[l] % roots;
      coeff *= weight[k].real();
      const cplx b = node[k] * unity[m];
      for (std::size_t j = 0; j < n; ++j) c[j] += a(l, j) * b;
    }
    if (coeff != 0.0) out.push_back({coeff, std::move(c)});
    for (std::size_t l = r; l-- > 0;) {
      if (++counter[l] < radix) break;
      counter[l] = 0;
    }
  }
}

}  // namespace

std::vector<SpectralTerm> spectral_split(const DenseTensor& t) {
  if (!is_cps(t)) throw Error(ErrorCode::NotCps, "spectral split needs a CPS tensor");
  const std::size_t n = t.dim();
  const std::size_t d = t.order() / 2;
  const double tn = frob_norm(t);
  std::vector<SpectralTerm> out;
  if (tn == 0.0) return out;

  const auto eig = herm_eig(HermMatrix::hermitize(matricize(t)));
  const std::size_t hs = eig.values.size();
  for (std::size_t k = 0; k < hs; ++k) {
    const double mu = eig.values[k];
    if (std::abs(mu) <= tol_decomp * tn) continue;
    CVector u(hs);
    const double s = std::sqrt(std::abs(mu));
    for (std::size_t i = 0; i < hs; ++i) u[i] = s * std::conj(eig.vectors(i, k));
    DenseTensor z = devectorize(u, n, d);
    DenseTensor zs = symmetrize(z);
    const double miss = frob_norm(z - zs);
    if (miss > tol_decomp * s) {
      throw Error(ErrorCode::NonSymmetricEigenvector, "symmetrization residual " + std::to_string(miss / s));
    }
    out.push_back({mu > 0.0 ? 1 : -1, std::move(zs)});
  }

  DenseTensor back = DenseTensor::zero(n, 2 * d);
  for (const auto& term : out) back += double(term.sign) * outer(conj(term.z), term.z);
  if (frob_norm(back - t) > tol_decomp * tn) throw Error(ErrorCode::ResidualTooLarge, "spectral split misses input");
  return out;
}

std::vector<CVector> symmetric_rank_one_decompose(const DenseTensor& z) {
  if (!is_symmetric(z)) throw Error(ErrorCode::NotSymmetric, "input tensor is not symmetric");
  const double zn = frob_norm(z);
  if (zn == 0.0) return {};
  std::vector<CVector> out;
  if (z.order() == 1) {
    out.emplace_back(z.data().begin(), z.data().end());
  } else if (z.order() == 2) {
    out = symmetric_matrix_terms(z);
  } else {
    out = pure_power_term(z);
    if (out.empty()) out = polarization_terms(z);
  }
  const double miss = frob_norm(assemble_symmetric(out, z.dim(), z.order()) - z);
  if (miss > tol_decomp * zn) throw Error(ErrorCode::ResidualTooLarge, "symmetric decomposition misses input");
  return out;
}

std::vector<CpsTerm> hilbert_terms(const CMatrix& a, std::size_t d) {
  if (d == 0 || a.rows() == 0) throw Error(ErrorCode::RangeError, "need d >= 1 and r >= 1");
  const std::size_t r = a.rows();
  const bool even = d % 2 == 0;
  const double count1 = std::pow(double((2 * d + 1) * d), double(r));
  const double count2 = even ? std::pow(double((d + 1) * (d + 1)), double(r)) : 0.0;
  if (count1 + count2 > double(max_hilbert_terms)) {
    throw Error(ErrorCode::TermBudgetExceeded, "Hilbert expansion needs " + std::to_string(count1 + count2) + " terms");
  }

  const double dfact = factorial(d);
  std::vector<double> alpha(2 * d + 1), gamma(2 * d + 1, 0.0);
  // Nodes -d..-1, 1..d+1: symmetric placement keeps the moment weights small.
  for (std::size_t k = 0; k <= 2 * d; ++k) alpha[k] = k < d ? double(k) - double(d) : double(k - d + 1);
  gamma[0] = 1.0;
  gamma[d] = std::sqrt(dfact);
  gamma[2 * d] = dfact;
  const CVector z = vandermonde_solve(alpha, gamma);

  std::vector<CpsTerm> out;
  emit_family(a, alpha, z, d, 1.0 / dfact / std::pow(double(d), double(r)), out);

  if (even) {
    std::vector<double> beta(d + 1), beta_sq(d + 1), delta(d + 1, 0.0);
    for (std::size_t k = 0; k <= d; ++k) {
      beta[k] = double(k + 1);
      beta_sq[k] = beta[k] * beta[k];
    }
    delta[0] = 1.0;
    delta[d / 2] = 1.0;
    const CVector y = vandermonde_solve(beta_sq, delta);
    emit_family(a, beta, y, d + 1, -1.0 / std::pow(double(d + 1), double(r)), out);
  }
  return out;
}

std::vector<CpsTerm> square_modulus_decompose(const DenseTensor& z) {
  const auto vecs = symmetric_rank_one_decompose(z);
  if (vecs.empty()) return {};
  if (vecs.size() > max_symmetric_rank) {
    throw Error(ErrorCode::TermBudgetExceeded, "symmetric rank " + std::to_string(vecs.size()) + " exceeds budget");
  }
  const std::size_t n = z.dim();
  CMatrix a(vecs.size(), n);
  for (std::size_t l = 0; l < vecs.size(); ++l)
    for (std::size_t j = 0; j < n; ++j) a(l, j) = vecs[l][j];
  const double zn = frob_norm(z);
  return merge_terms(hilbert_terms(a, z.order()), z.order(), 1e-12 * zn * zn);
}

std::vector<CpsTerm> merge_terms(const std::vector<CpsTerm>& terms, std::size_t d, double drop_below) {
  std::vector<CpsTerm> merged;
  std::map<std::vector<long long>, std::size_t> slot;
  for (const auto& term : terms) {
    const double s = norm(term.a);
    if (s == 0.0 || term.lambda == 0.0) continue;
    CVector u = term.a;
    for (auto& v : u) v /= s;
    fix_phase(u);
    std::vector<long long> key;
    key.reserve(2 * u.size());
    for (const auto& v : u) {
      key.push_back(std::llround(v.real() * 1e10));
      key.push_back(std::llround(v.imag() * 1e10));
    }
    const double lam = term.lambda * std::pow(s, 2.0 * double(d));
    auto [it, fresh] = slot.try_emplace(std::move(key), merged.size());
    if (fresh) {
      merged.push_back({lam, std::move(u)});
    } else {
      merged[it->second].lambda += lam;
    }
  }
  std::vector<CpsTerm> out;
  for (auto& term : merged)
    if (std::abs(term.lambda) > drop_below) out.push_back(std::move(term));
  return out;
}

double relative_residual(std::span<const CpsTerm> terms, const DenseTensor& t) {
  const DenseTensor back = assemble(terms, t.dim(), t.order() / 2);
  return frob_norm(back - t) / std::max(frob_norm(t), tol::abs_floor);
}

std::vector<CpsTerm> cps_decompose(const DenseTensor& t) {
  if (!is_cps(t)) throw Error(ErrorCode::NotCps, "input tensor is not CPS");
  const double tn = frob_norm(t);
  if (tn == 0.0) return {};
  const std::size_t d = t.order() / 2;
  std::vector<CpsTerm> raw;
  for (const auto& part : spectral_split(t)) {
    for (auto term : square_modulus_decompose(part.z)) {
      term.lambda *= part.sign;
      raw.push_back(std::move(term));
    }
  }
  auto out = merge_terms(raw, d, 1e-12 * tn);
  const double res = relative_residual(out, t);
  if (res > tol_decomp) throw Error(ErrorCode::ResidualTooLarge, "decomposition residual " + std::to_string(res));
  return out;
}

std::vector<PsTerm> ps_decompose(const DenseTensor& t) {
  if (!is_ps(t)) throw Error(ErrorCode::NotPartialSymmetric, "input tensor is not PS");
  const auto [u, v] = cartesian_split(t);
  std::vector<PsTerm> out;
  for (auto& term : cps_decompose(u)) out.push_back({cplx(term.lambda, 0.0), std::move(term.a)});
  for (auto& term : cps_decompose(v)) out.push_back({cplx(0.0, term.lambda), std::move(term.a)});
  return out;
}

std::vector<CpsTerm> realify_coefficients(std::span<const PsTerm> terms, const DenseTensor& t) {
  if (!is_cps(t)) throw Error(ErrorCode::NotCps, "target tensor is not CPS");
  std::vector<CpsTerm> out;
  for (const auto& term : terms)
    if (term.lambda.real() != 0.0) out.push_back({term.lambda.real(), term.a});
  const double res = relative_residual(out, t);
  if (res > tol_decomp) throw Error(ErrorCode::ResidualTooLarge, "realified terms miss by " + std::to_string(res));
  return out;
}

}  // namespace cps
