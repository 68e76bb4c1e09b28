#include "cpsten/cli.hpp"

#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "cpsten/decompose.hpp"
#include "cpsten/experiments.hpp"
#include "cpsten/io.hpp"

namespace cps {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Uncertified:
    case ErrorCode::NotRankOne:
      return ExitUncertified;
    case ErrorCode::NoConvergence:
    case ErrorCode::ResidualTooLarge:
    case ErrorCode::TermBudgetExceeded:
    case ErrorCode::NonSymmetricEigenvector:
    case ErrorCode::NotInSubspace:
    case ErrorCode::DegenerateNodes:
    case ErrorCode::SingularMatrix:
    case ErrorCode::ZeroMatrix:
      return ExitSolverFailure;
    default:
      return ExitInputError;
  }
}

namespace {

struct Globals {
  std::uint64_t seed = 0;
  double tol = 1e-7;
  int jobs = 1;
  std::string output;
};

class Emitter {
 public:
  Emitter(const Globals& g, std::ostream& out) : g_(g), out_(out) {}
  // Main result: --output file when given, stdout otherwise.
  void emit(const std::string& text) {
    if (g_.output.empty()) {
      out_ << text;
    } else {
      write_text_file(g_.output, text);
    }
  }
  void emit(const Json& j) { emit(j.dump() + "\n"); }

 private:
  const Globals& g_;
  std::ostream& out_;
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoul(item));
      } else {
        const std::size_t lo = std::stoul(item.substr(0, dash)), hi = std::stoul(item.substr(dash + 1));
        for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "bad size list '" + text + "'");
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

Json validate_report(const DenseTensor& t) {
  Json j;
  j["n"] = t.dim();
  j["order"] = t.order();
  j["norm"] = frob_norm(t);
  j["symmetric"] = is_symmetric(t);
  const bool even = t.order() % 2 == 0;
  const bool ps = even && is_ps(t);
  j["ps"] = ps;
  j["cps"] = ps && is_cps(t);
  if (ps) {
    j["hermitian_part_norm"] = frob_norm(hermitian_part(t));
    j["skew_part_norm"] = frob_norm(skew_part(t));
  } else {
    j["hermitian_part_norm"] = nullptr;
    j["skew_part_norm"] = nullptr;
  }
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conjugate partial-symmetric tensor toolkit", "cpsten-cli"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed for every random draw");
  app.add_option("--tol", g.tol, "ADMM stopping tolerance")->check(CLI::PositiveNumber);
  app.add_option("--jobs", g.jobs, "Worker threads for experiment batches")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "Write the result here instead of stdout");

  std::string file;
  auto* validate = app.add_subcommand("validate", "Report symmetry, PS and CPS structure of a tensor file");
  validate->add_option("file", file)->required();

  auto* decompose = app.add_subcommand("decompose", "Real-coefficient rank-one CPS decomposition");
  decompose->add_option("file", file)->required();

  std::string pi_text;
  bool canonical = false;
  auto* matricize_cmd = app.add_subcommand("matricize", "Matrix M_pi(T), standard split by default");
  matricize_cmd->add_option("file", file)->required();
  matricize_cmd->add_option("--pi", pi_text, "Mode permutation, e.g. 1,3,2,4");
  matricize_cmd->add_flag("--canonical", canonical, "Use the canonical permutation");

  std::string model_name = "sdp";
  std::optional<double> rho;
  int max_iter = 10000;
  bool negate = false;
  auto* rank1 = app.add_subcommand("rank1", "Largest eigenvalue and best rank-one approximation by convex relaxation");
  rank1->add_option("file", file)->required();
  rank1->add_option("--model", model_name)->check(CLI::IsMember({"sdp", "nuclear"}));
  rank1->add_option("--rho", rho, "Nuclear penalty, default ||C||_F");
  rank1->add_option("--pi", pi_text, "Mode permutation; canonical by default");
  rank1->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
  rank1->add_flag("--negate", negate, "Work on -T, i.e. minimize the conjugate form");

  double eps = 1e-4;
  int attempts = 5;
  auto* useig = app.add_subcommand("useig", "Largest US-eigenvalue of a symmetric tensor");
  useig->add_option("file", file)->required();
  useig->add_option("--eps", eps, "Perturbation norm for restarts; 0 disables them")->check(CLI::NonNegativeNumber);
  useig->add_option("--attempts", attempts, "Perturbed restarts")->check(CLI::NonNegativeNumber);
  useig->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);

  std::string exp_name, sizes_text = "4,6,8", methods_text = "nuclear,sdp", scenario_file;
  int instances = 20;
  bool no_timing = false;
  auto* experiment = app.add_subcommand("experiment", "Batch runs in CSV, summary table on the side");
  experiment->add_option("name", exp_name)->required()->check(CLI::IsMember({"radar", "random", "useig"}));
  experiment->add_option("--sizes", sizes_text, "Comma list or ranges, e.g. 4-8");
  experiment->add_option("--instances", instances)->check(CLI::NonNegativeNumber);
  experiment->add_option("--methods", methods_text);
  experiment->add_option("--rho", rho, "Nuclear penalty, default ||C||_F");
  experiment->add_option("--scenario", scenario_file, "Radar scenario JSON");
  experiment->add_option("--eps", eps)->check(CLI::NonNegativeNumber);
  experiment->add_option("--attempts", attempts)->check(CLI::NonNegativeNumber);
  experiment->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
  experiment->add_flag("--no-timing", no_timing, "Write NA for wall_ms so output is reproducible byte for byte");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return ExitInputError;
  }

  Emitter em(g, out);
  SolverOptions opts;
  opts.tol = g.tol;
  opts.max_iter = max_iter;

  try {
    if (*validate) {
      em.emit(validate_report(read_tensor_file(file)));
      return ExitOk;
    }

    if (*decompose) {
      const DenseTensor t = read_tensor_file(file);
      const auto terms = cps_decompose(t);
      Json j;
      j["terms"] = terms_to_json(terms);
      j["residual"] = relative_residual(terms, t);
      j["term_count"] = terms.size();
      em.emit(j);
      return ExitOk;
    }

    if (*matricize_cmd) {
      const DenseTensor t = read_tensor_file(file);
      if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "matricization needs even order");
      const Permutation2d pi = !pi_text.empty() ? Permutation2d::parse(pi_text)
                               : canonical      ? canonical_pi(t.order() / 2)
                                                : Permutation2d::identity(t.order());
      const CMatrix m = matricize_pi(t, pi);
      Json j;
      j["pi"] = pi.values();
      j["conj_condition"] = satisfies_conj_condition(pi);
      j["rank_condition"] = satisfies_rank_condition(pi);
      const bool herm = hermitian_residual(m) <= tol::structure;
      j["hermitian"] = herm;
      if (herm) {
        j["rank_one_ratio"] = top_singular_ratio(HermMatrix::hermitize(m));
      } else {
        j["rank_one_ratio"] = nullptr;
      }
      j["matrix"] = matrix_to_json(m);
      em.emit(j);
      return ExitOk;
    }

    if (*rank1) {
      DenseTensor t = read_tensor_file(file);
      if (negate) t *= -1.0;
      std::optional<Permutation2d> pi;
      if (!pi_text.empty()) pi = Permutation2d::parse(pi_text);
      const MatrixModel model = build_matrix_model(t, pi);
      const double used_rho = rho.value_or(default_nuclear_rho(model));
      const SolveReport r = model_name == "sdp" ? solve_sdp(model, opts) : solve_nuclear(model, used_rho, opts);
      Json j;
      j["model"] = model_name;
      if (model_name == "nuclear") j["rho"] = used_rho;
      j["pi"] = model.pi.values();
      j["negated"] = negate;
      const Json rep = report_to_json(r);
      for (const auto& [k, v] : rep.items()) j[k] = v;
      em.emit(j);
      if (r.certified) return ExitOk;
      return r.status == SolveStatus::Converged ? ExitUncertified : ExitSolverFailure;
    }

    if (*useig) {
      const DenseTensor z = read_tensor_file(file);
      const RetryResult r = perturb_and_retry(z, eps, attempts, g.seed, opts);
      Json j;
      j["lambda"] = r.lambda;
      j["z"] = vector_to_json(r.z);
      const cplx p = us_pairing(z, r.z);
      j["pairing"] = {p.real(), p.imag()};
      j["eigen_residual"] = eigen_residual(us_lift(z), {r.lambda * r.lambda, r.z});
      Json log = Json::array();
      for (const auto& a : r.log)
        log.push_back({{"attempt", a.attempt},
                       {"seed", a.seed},
                       {"certified", a.certified},
                       {"objective", a.objective},
                       {"iterations", a.iterations}});
      j["attempts"] = log;
      j["report"] = report_to_json(r.report);
      em.emit(j);
      return ExitOk;
    }

    if (*experiment) {
      ExperimentConfig cfg;
      cfg.name = exp_name;
      cfg.sizes = parse_sizes(sizes_text);
      cfg.instances = instances;
      cfg.seed = g.seed;
      cfg.jobs = g.jobs;
      cfg.methods = split(methods_text);
      cfg.rho = rho;
      cfg.solver = opts;
      cfg.eps = eps;
      cfg.attempts = attempts;
      if (!scenario_file.empty()) {
        cfg.scenario = scenario_from_json(read_json_file(scenario_file));
        if (sizes_text == "4,6,8") cfg.sizes = {cfg.scenario->n};
      }
      const auto rows = run_experiment(cfg);
      em.emit(rows_to_csv(rows, !no_timing));
      (g.output.empty() ? err : out) << summary_table(rows, !no_timing);
      return ExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return ExitInputError;
}

}  // namespace cps
