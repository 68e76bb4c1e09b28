#include "cpsten/rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace cps {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationCapReached: return "iteration_cap";
    case SolveStatus::Diverged: return "diverged";
  }
  return "unknown";
}

MatrixModel build_matrix_model(const DenseTensor& t, std::optional<Permutation2d> pi) {
  if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "model needs an even-order tensor");
  if (!is_cps(t)) throw Error(ErrorCode::NotCps, "model needs a CPS tensor");
  const std::size_t n = t.dim();
  const std::size_t d = t.order() / 2;
  MatrixModel m;
  m.t = t;
  m.n = n;
  m.d = d;
  m.pi = pi ? *pi : canonical_pi(d);
  if (m.pi.order() != t.order()) throw Error(ErrorCode::BadPermutation, "permutation length differs from order");
  if (!satisfies_conj_condition(m.pi) || !satisfies_rank_condition(m.pi)) {
    throw Error(ErrorCode::BadPermutation, "permutation " + m.pi.str() + " fails the matricization conditions");
  }
  m.c = HermMatrix::hermitize(matricize_pi(t, m.pi).conj());

  // Matrix position -> tensor offset, by matricizing a tensor that stores its own offsets.
  DenseTensor offsets = DenseTensor::zero(n, 2 * d);
  for (std::size_t p = 0; p < offsets.size(); ++p) offsets[p] = double(p);
  const CMatrix where = matricize_pi(offsets, m.pi);

  const std::size_t hs = ipow(n, d);
  auto canonical = [&](std::size_t p) {
    auto dig = digits(p, n, 2 * d);
    std::sort(dig.begin(), dig.begin() + d);
    std::sort(dig.begin() + d, dig.end());
    std::size_t out = 0;
    for (std::size_t v : dig) out = out * n + v;
    return out;
  };
  std::map<std::size_t, std::size_t> ids;
  auto id_of = [&](std::size_t canon) { return ids.try_emplace(canon, ids.size()).first->second; };
  const std::size_t total = where.rows() * where.cols();
  m.orbit.resize(total);
  m.partner.resize(total);
  const auto src = where.data();
  for (std::size_t k = 0; k < total; ++k) {
    const auto p = std::size_t(std::llround(src[k].real()));
    const std::size_t swapped = (p % hs) * hs + p / hs;
    m.orbit[k] = id_of(canonical(p));
    m.partner[k] = id_of(canonical(swapped));
  }
  m.orbit_size.assign(ids.size(), 0.0);
  for (std::size_t o : m.orbit) m.orbit_size[o] += 1.0;

  m.trace_direction = project_cps_subspace(CMatrix::identity(hs), m);
  m.trace_direction_norm2 = std::pow(frob_norm(m.trace_direction.matrix()), 2);
  return m;
}

HermMatrix project_cps_subspace(const CMatrix& x, const MatrixModel& model) {
  const std::size_t total = model.orbit.size();
  if (x.rows() * x.cols() != total || !x.square()) throw Error(ErrorCode::SizeMismatch, "matrix size differs from model");
  std::vector<cplx> avg(model.orbit_size.size());
  const auto src = x.data();
  for (std::size_t k = 0; k < total; ++k) avg[model.orbit[k]] += src[k];
  for (std::size_t o = 0; o < avg.size(); ++o) avg[o] /= model.orbit_size[o];
  CMatrix out(x.rows(), x.cols());
  auto dst = out.data();
  for (std::size_t k = 0; k < total; ++k) dst[k] = 0.5 * (avg[model.orbit[k]] + std::conj(avg[model.partner[k]]));
  return HermMatrix::hermitize(out);
}

namespace {

// Projection onto {X in M_pi(CPS), tr X = 1}: the trace functional restricted to the subspace is <P_S(I), .>.
HermMatrix project_affine(const CMatrix& z, const MatrixModel& model) {
  HermMatrix p = project_cps_subspace(z, model);
  cplx tr{};
  for (std::size_t i = 0; i < p.dim(); ++i) tr += p(i, i);
  CMatrix out = p.matrix();
  CMatrix shift = model.trace_direction.matrix();
  shift *= (1.0 - tr.real()) / model.trace_direction_norm2;
  out += shift;
  return HermMatrix::hermitize(out);
}

double trace_of(const HermMatrix& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x(i, i).real();
  return s;
}

SolveReport run_admm(const MatrixModel& model, const SolverOptions& opts, std::optional<double> rho) {
  const std::size_t dim = model.c.dim();
  if (model.trace_direction_norm2 == 0.0) throw Error(ErrorCode::SizeMismatch, "model has no trace direction");
  double sigma = opts.sigma;
  CMatrix start = CMatrix::identity(dim);
  start *= 1.0 / double(dim);
  HermMatrix x = project_affine(start, model);
  HermMatrix y = x;
  CMatrix u(dim, dim);
  CMatrix basis = CMatrix::identity(dim);

  SolveReport rep;
  rep.status = SolveStatus::IterationCapReached;
  double r = 0.0, s = 0.0;
  int it = 0;
  while (it < opts.max_iter) {
    ++it;
    CMatrix z = y.matrix() - u;
    CMatrix step = model.c.matrix();
    step *= 1.0 / sigma;
    z += step;
    x = project_affine(z, model);

    const HermMatrix w = HermMatrix::hermitize(x.matrix() + u);
    const HermEigen eig = herm_eig(w, basis);
    basis = eig.vectors;
    const HermMatrix y_prev = y;
    if (rho) {
      const double tau = *rho / sigma;
      y = eig.rebuild([tau](double l) { return l > tau ? l - tau : (l < -tau ? l + tau : 0.0); });
    } else {
      y = eig.rebuild([](double l) { return l > 0.0 ? l : 0.0; });
    }
    const CMatrix gap = x.matrix() - y.matrix();
    u += gap;
    r = frob_norm(gap);
    s = sigma * frob_norm(y.matrix() - y_prev.matrix());

    if (!std::isfinite(r) || frob_norm(x.matrix()) > opts.divergence_bound) {
      rep.status = SolveStatus::Diverged;
      break;
    }
    if (std::max(r, s) <= opts.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    if (opts.adapt_every > 0 && it % opts.adapt_every == 0) {
      if (r > 10.0 * s) {
        sigma *= 2.0;
        u *= 0.5;
      } else if (s > 10.0 * r) {
        sigma *= 0.5;
        u *= 2.0;
      }
    }
  }

  rep.x = x;
  rep.iterations = it;
  rep.primal_residual = r;
  rep.dual_residual = s;
  rep.objective = frob_inner(model.c.matrix(), x.matrix()).real();
  rep.trace_residual = std::abs(trace_of(x) - 1.0);
  rep.subspace_residual = frob_norm(x.matrix() - project_cps_subspace(x.matrix(), model).matrix());
  if (rho && rep.status != SolveStatus::Diverged) {
    double nuc = 0.0;
    for (double l : herm_eig(x, basis).values) nuc += std::abs(l);
    rep.objective -= *rho * nuc;
  }
  if (rep.status != SolveStatus::Diverged) certify_and_recover(rep, model);
  return rep;
}

double form_value(const DenseTensor& t, const CVector& x) { return conj_form_eval(t, x).real(); }

}  // namespace

SolveReport solve_sdp(const MatrixModel& model, const SolverOptions& opts) {
  return run_admm(model, opts, std::nullopt);
}

SolveReport solve_nuclear(const MatrixModel& model, double rho, const SolverOptions& opts) {
  if (!(rho > 0.0)) throw Error(ErrorCode::RangeError, "rho must be positive");
  return run_admm(model, opts, rho);
}

double default_nuclear_rho(const MatrixModel& model) { return frob_norm(model.c.matrix()); }

void certify_and_recover(SolveReport& report, const MatrixModel& model) {
  report.certified = false;
  report.eigenpair.reset();
  if (frob_norm(report.x.matrix()) == 0.0) {
    report.rank_one_ratio = 1.0;
    return;
  }
  const HermEigen eig = herm_eig(report.x);
  report.rank_one_ratio = top_singular_ratio(eig);
  report.min_eigenvalue = eig.values.back();
  if (report.rank_one_ratio > rank1_tol) return;

  RankOneVector r1;
  try {
    r1 = extract_rank_one_vector(report.x, eig, model.pi, model.n, model.d);
  } catch (const Error&) {
    return;
  }
  // X ~ M_pi(conj(x)^d (x) x^d) is the lift of the eigenvector x itself.
  EigenPair pair{cplx(form_value(model.t, r1.x)), r1.x};
  double res = eigen_residual(model.t, pair);
  if (res > eig_tol) {
    EigenPair refined = polish_eigenpair(model.t, pair.x, 200);
    const double res2 = eigen_residual(model.t, refined);
    if (res2 < res) {
      pair = std::move(refined);
      res = res2;
    }
  }
  report.eigenpair = pair;
  report.eigen_residual = res;
  report.certified = res <= eig_tol;
}

static void require_unit(const EigenPair& pair) {
  if (std::abs(norm(pair.x) - 1.0) > tol::structure) throw Error(ErrorCode::NotUnit, "eigenvector is not unit length");
}

double eigen_residual(const DenseTensor& t, const EigenPair& pair) {
  require_unit(pair);
  CVector g = partial_map(t, pair.x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= pair.value * pair.x[i];
  return norm(g);
}

double best_rank_one_error(const DenseTensor& t, const EigenPair& pair) {
  require_unit(pair);
  const PsTerm term{pair.value, conj_copy(pair.x)};
  return frob_norm(t - assemble(std::span<const PsTerm>(&term, 1), t.dim(), t.order() / 2));
}

EigenPair polish_eigenpair(const DenseTensor& t, CVector x, int max_steps) {
  const double scale = std::max(frob_norm(t), tol::abs_floor);
  double nx = norm(x);
  for (auto& v : x) v /= nx;
  double f = form_value(t, x);
  double shift = 0.0;
  for (int step = 0; step < max_steps; ++step) {
    const CVector g = partial_map(t, x);
    CVector cand(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cand[i] = g[i] + shift * x[i];
    const double nc = norm(cand);
    if (nc == 0.0) break;
    for (auto& v : cand) v /= nc;
    const double fc = form_value(t, cand);
    if (fc < f - 1e-15 * scale) {
      shift = 2.0 * shift + 0.1 * scale;
      if (shift > 1e6 * scale) break;
      continue;
    }
    double moved = 0.0;
    const cplx ip = dot(x, cand);
    const cplx rot = ip == cplx{} ? cplx(1.0) : std::conj(ip) / std::abs(ip);
    for (std::size_t i = 0; i < x.size(); ++i) moved += std::norm(cand[i] * rot - x[i]);
    x = std::move(cand);
    f = fc;
    if (std::sqrt(moved) < 1e-15) break;
  }
  fix_phase(x);
  return {cplx(form_value(t, x)), std::move(x)};
}

EigenPair brute_force_max_eig(const DenseTensor& t, int grid) {
  if (t.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "brute force search needs n = 2");
  if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "brute force search needs even order");
  const CMatrix m = matricize(t);
  const std::size_t hs = m.rows();
  double best = -std::numeric_limits<double>::infinity();
  CVector arg;
  CVector u(hs);
  for (int a = 0; a <= grid; ++a) {
    const double th = 0.5 * std::numbers::pi * a / grid;
    for (int b = 0; b < grid; ++b) {
      const double ph = 2.0 * std::numbers::pi * b / grid;
      const cplx x0 = std::cos(th);
      const cplx x1 = std::sin(th) * std::polar(1.0, ph);
      // u = x^{(x)d}, built in place
      u[0] = 1.0;
      for (std::size_t len = 1; len < hs; len *= 2) {
        for (std::size_t i = len; i-- > 0;) {
          u[2 * i + 1] = u[i] * x1;
          u[2 * i] = u[i] * x0;
        }
      }
      double f = 0.0;
      for (std::size_t i = 0; i < hs; ++i) {
        cplx row{};
        for (std::size_t j = 0; j < hs; ++j) row += m(i, j) * u[j];
        f += (std::conj(u[i]) * row).real();
      }
      if (f > best) {
        best = f;
        arg = CVector{x0, x1};
      }
      if (a == 0) break;  // theta = 0 is a single point modulo phase
    }
  }
  EigenPair polished = polish_eigenpair(t, arg);
  if (polished.value.real() < best) {
    fix_phase(arg);
    return {cplx(best), arg};
  }
  return polished;
}

}  // namespace cps
