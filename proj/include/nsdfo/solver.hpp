#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsdfo/linesearch.hpp"
#include "nsdfo/problems.hpp"
#include "nsdfo/simplex_qp.hpp"

namespace nsdfo {

enum class MetricMode { Identity, DiagonalEstimate };

struct SolverConfig {
  double theta = 0.5;        // step contraction on linesearch failure
  double eta = 1e-3;         // trigger threshold for the extra directions
  double gamma = 1e-6;       // sufficient decrease coefficient
  double delta = 0.5;        // extrapolation divisor
  double alpha_max = 1e3;    // extrapolation cap
  double alpha0_dense = 1.0;
  double epsilon_cluster = 0.0;  // <= 0: scale by sample energy
  int h_max = 20;
  unsigned seed = 0;
  std::int64_t budget = 0;   // 0 = unlimited
  double stop_alpha = 1e-7;
  MetricMode metric_mode = MetricMode::Identity;

  void validate() const;
};

struct RunRecord {
  std::string problem;
  std::string solver;
  int n = 0;
  unsigned seed = 0;
  SolverConfig config;
  std::vector<std::pair<std::int64_t, double>> history;  // (nf, best f)
  Vec final_x;
  double final_f = 0.0;
  std::string reason;  // "stepsize" | "budget"

  std::int64_t evals() const { return history.empty() ? 0 : history.back().first; }
};

/// Diagonal SPD metric from per-coordinate curvature estimates, clamped to
/// [1e-6, 1e6]. Identity mode ignores the estimates.
SpdMetric build_metric(const Vec& curvature, MetricMode mode);

/// Fast-CS-DFN: coordinate searches, dense-direction search at small steps,
/// and the cluster-derived direction.
RunRecord run_fast_csdfn(const ObjectiveProblem& problem, const SolverConfig& config);

/// Baseline CS-DFN: same loop without the metric/clustering steps.
RunRecord run_csdfn(const ObjectiveProblem& problem, const SolverConfig& config);

std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& text);

}  // namespace nsdfo
