#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpsten/applications.hpp"

namespace cps {

struct ExperimentConfig {
  std::string name;                  // radar, random or useig
  std::vector<std::size_t> sizes;    // ignored by useig
  int instances = 20;
  std::uint64_t seed = 0;            // instance k uses seed + k
  int jobs = 1;
  std::vector<std::string> methods{"nuclear", "sdp"};
  std::optional<double> rho;         // nuclear penalty; default ||C||_F per instance
  std::optional<RadarScenario> scenario;  // radar template; s0 is redrawn per instance
  SolverOptions solver;
  double eps = 1e-4;                 // useig perturbation size
  int attempts = 5;
};

struct ExperimentRow {
  std::string experiment;
  std::string instance;  // label, e.g. the tensor name for useig
  std::size_t n = 0;
  std::uint64_t instance_seed = 0;
  std::string method;
  bool certified = false;
  double objective = 0.0;
  std::optional<double> lambda;
  double eigen_residual = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  std::string status;
};

/// Rows come back in task order whatever the thread count. Throws RangeError on a bad config.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

/// One line per row; timing=false writes NA for wall_ms so runs compare byte for byte.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool timing = true);

/// Rank-one percentage and mean time per (experiment, n, method).
std::string summary_table(const std::vector<ExperimentRow>& rows, bool timing = true);

/// The two US test tensors of order 3 in dimension 2, by label "us-a" or "us-b".
DenseTensor us_example(const std::string& label);

}  // namespace cps
