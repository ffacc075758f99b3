#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsdfo/solver.hpp"

namespace nsdfo {

struct ConvergenceTest {
  double tau;  // required precision level
  double f0;   // f(x0)
  double fL;   // best value found by any compared solver

  double threshold() const { return fL + tau * (f0 - fL); }
};

/// Smallest evaluation count at which the run's best-so-far value meets the
/// convergence test; absent if it never does.
std::optional<std::int64_t> solved_at(const RunRecord& record, const ConvergenceTest& test);

/// Right-continuous step curve over [0, inf).
struct ProfileCurve {
  std::string solver;
  std::vector<double> xs;  // breakpoint abscissae, ascending
  std::vector<double> ys;  // curve value from xs[i] (inclusive) onward

  double value_at(double x) const;
};

/// One grid cell of the benchmark table.
struct CellStat {
  std::string problem;
  std::string solver;
  int n = 0;
  std::optional<std::int64_t> t_ps;
  double ratio = 0.0;  // r_ps for performance, t_ps/(n+1) for data; inf if unsolved
};

/// Per-problem performance ratios r_ps = t_ps / min_s t_ps and the resulting
/// profile curves. Problems no solver solves are dropped (reported in
/// warnings).
std::vector<ProfileCurve> performance_profile(const std::vector<RunRecord>& records, double tau,
                                              std::vector<std::string>* warnings = nullptr,
                                              std::vector<CellStat>* cells = nullptr);

/// Data profiles d_s(kappa) with kappa_ps = t_ps / (n_p + 1).
std::vector<ProfileCurve> data_profile(const std::vector<RunRecord>& records, double tau,
                                       std::vector<CellStat>* cells = nullptr);

struct SuiteResult {
  std::vector<RunRecord> records;
  std::vector<std::string> warnings;
  std::vector<std::string> written_files;
  std::string manifest_path;
};

struct SuiteSpec {
  std::vector<std::pair<std::string, int>> problems;  // (name, dim)
  std::vector<std::string> solvers;                   // "fast-csdfn" / "csdfn"
  SolverConfig config;                                // budget 0 = 20000*n per problem
  std::vector<double> taus = {1e-1, 1e-3, 1e-5};
  std::string out_dir;
  int jobs = 1;
};

/// Runs the problem x solver grid, persists every RunRecord as JSON, and
/// emits CSV + SVG profiles per (kind, tau) plus a manifest.
SuiteResult run_suite(const SuiteSpec& spec);

/// Recomputes CSV/SVG profiles from a persisted bundle; performs no
/// objective evaluations. Throws on missing/corrupt records.
SuiteResult recompute_profiles(const std::string& bundle_dir, const std::vector<double>& taus);

std::vector<RunRecord> load_bundle(const std::string& bundle_dir);

/// Writes profile CSV/SVG/manifest artifacts for already-computed records.
void emit_profiles(const std::vector<RunRecord>& records, const std::vector<double>& taus,
                   const std::string& out_dir, SuiteResult& result);

}  // namespace nsdfo
