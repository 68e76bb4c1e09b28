#include "cpsten/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace cps {

namespace {

using Task = std::function<std::vector<ExperimentRow>()>;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentRow row_from_report(const SolveReport& r) {
  ExperimentRow row;
  row.certified = r.certified;
  row.objective = r.objective;
  row.iterations = r.iterations;
  row.status = std::string(to_string(r.status));
  if (r.eigenpair) {
    row.lambda = r.eigenpair->value.real();
    row.eigen_residual = r.eigen_residual;
  }
  return row;
}

std::vector<ExperimentRow> solve_methods(const DenseTensor& t, const ExperimentConfig& cfg) {
  std::vector<ExperimentRow> out;
  const MatrixModel model = build_matrix_model(t);
  for (const auto& method : cfg.methods) {
    const auto t0 = std::chrono::steady_clock::now();
    const SolveReport r = method == "sdp" ? solve_sdp(model, cfg.solver)
                                          : solve_nuclear(model, cfg.rho.value_or(default_nuclear_rho(model)), cfg.solver);
    ExperimentRow row = row_from_report(r);
    row.wall_ms = elapsed_ms(t0);
    row.method = method;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ExperimentRow> solve_us(const std::string& label, const ExperimentConfig& cfg) {
  const DenseTensor z = us_example(label);
  ExperimentRow row;
  row.method = "sdp";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const RetryResult r = perturb_and_retry(z, cfg.eps, cfg.attempts, cfg.seed, cfg.solver);
    row = row_from_report(r.report);
    row.method = r.log.size() > 1 ? "sdp+perturb" : "sdp";
    row.lambda = r.lambda;
    // Residual of the US pair lifted back to the unperturbed tensor.
    CVector x = r.z;
    row.eigen_residual = eigen_residual(us_lift(z), {r.lambda * r.lambda, x});
    for (const auto& a : r.log) row.iterations = a.iterations;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Uncertified) throw;
    row.status = "uncertified";
  }
  row.wall_ms = elapsed_ms(t0);
  return {row};
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.name != "radar" && cfg.name != "random" && cfg.name != "useig")
    throw Error(ErrorCode::RangeError, "unknown experiment '" + cfg.name + "'");
  if (cfg.instances < 0) throw Error(ErrorCode::RangeError, "instance count must be nonnegative");
  for (const auto& m : cfg.methods)
    if (m != "sdp" && m != "nuclear") throw Error(ErrorCode::RangeError, "unknown method '" + m + "'");
  if (cfg.rho && !(*cfg.rho > 0.0)) throw Error(ErrorCode::RangeError, "rho must be positive");
  for (std::size_t n : cfg.sizes)
    if (n < 2) throw Error(ErrorCode::RangeError, "sizes must be at least 2");
}

}  // namespace

DenseTensor us_example(const std::string& label) {
  double v[4];
  if (label == "us-a") {
    v[0] = 2, v[1] = 1, v[2] = -1, v[3] = 1;
  } else if (label == "us-b") {
    v[0] = 2, v[1] = -1, v[2] = -2, v[3] = 1;
  } else {
    throw Error(ErrorCode::RangeError, "unknown US example '" + label + "'");
  }
  auto z = DenseTensor::zero(2, 3);
  // Entry value depends only on how many indices equal 2.
  for (std::size_t off = 0; off < z.size(); ++off) {
    std::size_t twos = 0;
    for (std::size_t dgt : digits(off, 2, 3)) twos += dgt;
    z[off] = v[twos];
  }
  return z;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<Task> tasks;
  std::vector<ExperimentRow> header;  // per-task identity, copied into each produced row
  if (cfg.name == "useig") {
    for (const std::string label : {"us-a", "us-b"}) {
      tasks.push_back([label, &cfg] { return solve_us(label, cfg); });
      ExperimentRow h;
      h.instance = label;
      h.n = 2;
      h.instance_seed = cfg.seed;
      header.push_back(h);
    }
  } else {
    for (std::size_t n : cfg.sizes) {
      for (int k = 0; k < cfg.instances; ++k) {
        const std::uint64_t s = cfg.seed + std::uint64_t(k);
        if (cfg.name == "random") {
          tasks.push_back([n, s, &cfg] { return solve_methods(random_cps(n, s), cfg); });
        } else {
          tasks.push_back([n, s, &cfg] {
            RadarScenario sc = cfg.scenario && cfg.scenario->n == n ? *cfg.scenario : default_scenario(n, s);
            sc.s0 = random_code(n, s);
            return solve_methods(-1.0 * radar_tensor(sc), cfg);
          });
        }
        ExperimentRow h;
        h.instance = "seed-" + std::to_string(s);
        h.n = n;
        h.instance_seed = s;
        header.push_back(h);
      }
    }
  }

  std::vector<std::vector<ExperimentRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (const Error& e) {
        ExperimentRow row;
        row.method = "error";
        row.status = e.what();
        results[i] = {row};
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, int(tasks.size())));
  std::vector<std::jthread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  pool.clear();

  std::vector<ExperimentRow> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (auto& r : results[i]) {
      r.experiment = cfg.name;
      r.instance = header[i].instance;
      r.n = header[i].n;
      r.instance_seed = header[i].instance_seed;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool timing) {
  std::ostringstream os;
  os << "experiment,instance,n,instance_seed,method,certified,objective,lambda,eigen_residual,iterations,wall_ms,status\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.instance << ',' << r.n << ',' << r.instance_seed << ',' << r.method << ','
       << (r.certified ? "true" : "false") << ',' << fmt("%.6g", r.objective) << ','
       << (r.lambda ? fmt("%.6g", *r.lambda) : "NA") << ',' << (r.lambda ? fmt("%.6g", r.eigen_residual) : "NA")
       << ',' << r.iterations << ',' << (timing ? fmt("%.6g", r.wall_ms) : "NA") << ',' << csv_field(r.status)
       << '\n';
  }
  return os.str();
}

std::string summary_table(const std::vector<ExperimentRow>& rows, bool timing) {
  struct Cell {
    int total = 0, certified = 0;
    double ms = 0.0;
  };
  std::map<std::tuple<std::string, std::size_t, std::string>, Cell> cells;
  for (const auto& r : rows) {
    auto& c = cells[{r.experiment, r.n, r.method}];
    ++c.total;
    c.certified += r.certified;
    c.ms += r.wall_ms;
  }
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %4s  %-12s %9s %11s %12s\n", "experiment", "n", "method", "instances",
                "rank-one %", "mean ms");
  os << line;
  for (const auto& [key, c] : cells) {
    const auto& [exp, n, method] = key;
    const std::string ms = timing ? fmt("%.1f", c.ms / c.total) : "NA";
    std::snprintf(line, sizeof line, "%-10s %4zu  %-12s %9d %11.1f %12s\n", exp.c_str(), n, method.c_str(), c.total,
                  100.0 * c.certified / c.total, ms.c_str());
    os << line;
  }
  return os.str();
}

}  // namespace cps
