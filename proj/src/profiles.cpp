#include "nsdfo/profiles.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nsdfo {

namespace fs = std::filesystem;

std::optional<std::int64_t> solved_at(const RunRecord& record, const ConvergenceTest& test) {
  if (record.history.empty()) throw std::invalid_argument("solved_at: empty history");
  const double thr = test.threshold();
  for (const auto& [nf, f] : record.history)
    if (f <= thr) return nf;
  return std::nullopt;
}

double ProfileCurve::value_at(double x) const {
  double v = 0.0;
  for (size_t i = 0; i < xs.size() && xs[i] <= x; ++i) v = ys[i];
  return v;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_tau(double tau) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", tau);
  return buf;
}

struct ProblemGroup {
  std::string key;  // "name:n"
  std::string name;
  int n = 0;
  double f0 = 0.0;
  double fL = 0.0;
  std::map<std::string, const RunRecord*> by_solver;
};

// Groups records per problem instance and derives f0/fL; keys and solver
// lists come out sorted, so downstream output is deterministic.
std::vector<ProblemGroup> group_records(const std::vector<RunRecord>& records,
                                        std::vector<std::string>& solvers) {
  std::map<std::string, ProblemGroup> groups;
  std::set<std::string> solver_set;
  for (const auto& r : records) {
    const std::string key = r.problem + ":" + std::to_string(r.n);
    auto& g = groups[key];
    if (g.by_solver.empty()) {
      g.key = key;
      g.name = r.problem;
      g.n = r.n;
      g.f0 = r.history.empty() ? r.final_f : r.history.front().second;
      g.fL = r.final_f;
    } else {
      g.fL = std::min(g.fL, r.final_f);
    }
    g.by_solver[r.solver] = &r;
    solver_set.insert(r.solver);
  }
  solvers.assign(solver_set.begin(), solver_set.end());
  std::vector<ProblemGroup> out;
  for (auto& [k, g] : groups) out.push_back(std::move(g));
  return out;
}

ProfileCurve curve_from_indices(const std::string& solver, std::vector<double> finite,
                                size_t total) {
  ProfileCurve c;
  c.solver = solver;
  std::sort(finite.begin(), finite.end());
  size_t i = 0;
  while (i < finite.size()) {
    size_t j = i;
    while (j < finite.size() && finite[j] == finite[i]) ++j;
    c.xs.push_back(finite[i]);
    c.ys.push_back(double(j) / double(total));
    i = j;
  }
  return c;
}

}  // namespace

std::vector<ProfileCurve> performance_profile(const std::vector<RunRecord>& records, double tau,
                                              std::vector<std::string>* warnings,
                                              std::vector<CellStat>* cells) {
  std::vector<std::string> solvers;
  auto groups = group_records(records, solvers);
  if (solvers.size() < 2)
    throw std::invalid_argument("performance_profile: need at least 2 solvers");

  // t_ps per cell, then drop problems nobody solves.
  std::map<std::string, std::map<std::string, std::optional<std::int64_t>>> t;
  std::vector<const ProblemGroup*> kept;
  for (const auto& g : groups) {
    bool any = false;
    for (const auto& s : solvers) {
      auto it = g.by_solver.find(s);
      if (it == g.by_solver.end())
        throw std::invalid_argument("performance_profile: missing cell " + g.key + " x " + s);
      auto tp = solved_at(*it->second, {tau, g.f0, g.fL});
      t[g.key][s] = tp;
      any = any || tp.has_value();
    }
    if (any)
      kept.push_back(&g);
    else if (warnings)
      warnings->push_back("problem " + g.key + " unsolved by every solver at tau=" +
                          fmt_tau(tau) + "; dropped from performance profile");
  }

  std::vector<ProfileCurve> curves;
  for (const auto& s : solvers) {
    std::vector<double> ratios;
    for (const auto* g : kept) {
      std::int64_t tmin = std::numeric_limits<std::int64_t>::max();
      for (const auto& s2 : solvers)
        if (t[g->key][s2]) tmin = std::min(tmin, *t[g->key][s2]);
      const auto& tp = t[g->key][s];
      const double ratio = tp ? double(*tp) / double(tmin) : kInf;
      if (cells) cells->push_back({g->name, s, g->n, tp, ratio});
      if (std::isfinite(ratio)) ratios.push_back(ratio);
    }
    curves.push_back(curve_from_indices(s, std::move(ratios), kept.size()));
  }
  return curves;
}

std::vector<ProfileCurve> data_profile(const std::vector<RunRecord>& records, double tau,
                                       std::vector<CellStat>* cells) {
  std::vector<std::string> solvers;
  auto groups = group_records(records, solvers);

  std::vector<ProfileCurve> curves;
  for (const auto& s : solvers) {
    std::vector<double> kappas;
    for (const auto& g : groups) {
      auto it = g.by_solver.find(s);
      if (it == g.by_solver.end())
        throw std::invalid_argument("data_profile: missing cell " + g.key + " x " + s);
      auto tp = solved_at(*it->second, {tau, g.f0, g.fL});
      const double kappa = tp ? double(*tp) / double(g.n + 1) : kInf;
      if (cells) cells->push_back({g.name, s, g.n, tp, kappa});
      if (std::isfinite(kappa)) kappas.push_back(kappa);
    }
    curves.push_back(curve_from_indices(s, std::move(kappas), groups.size()));
  }
  return curves;
}

namespace {

void write_csv(const std::string& path, const std::vector<CellStat>& cells, double tau,
               SuiteResult& result) {
  std::vector<CellStat> rows = cells;
  std::sort(rows.begin(), rows.end(), [](const CellStat& a, const CellStat& b) {
    return std::tie(a.problem, a.n, a.solver) < std::tie(b.problem, b.n, b.solver);
  });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "problem,solver,n,tau,t_ps,ratio\n";
  for (const auto& c : rows) {
    out << c.problem << ',' << c.solver << ',' << c.n << ',' << fmt_tau(tau) << ',';
    if (c.t_ps)
      out << *c.t_ps;
    else
      out << "NA";
    out << ',' << fmt_double(c.ratio) << '\n';
  }
  result.written_files.push_back(path);
}

void write_svg(const std::string& path, const std::vector<ProfileCurve>& curves,
               const std::string& title, const std::string& xlabel, bool log_x,
               SuiteResult& result) {
  const int W = 640, H = 480, ML = 60, MR = 20, MT = 40, MB = 50;
  double xmax = log_x ? 2.0 : 1.0;
  for (const auto& c : curves)
    if (!c.xs.empty()) xmax = std::max(xmax, c.xs.back());
  xmax *= log_x ? 1.1 : 1.05;
  const double xmin = log_x ? 1.0 : 0.0;

  auto px = [&](double x) {
    const double t = log_x ? std::log(std::max(x, xmin)) / std::log(xmax)
                           : (x - xmin) / (xmax - xmin);
    return ML + t * (W - ML - MR);
  };
  auto py = [&](double y) { return H - MB - y * (H - MT - MB); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<!-- " << title << " -->\n";
  for (const auto& c : curves) {
    out << "<!-- data solver=" << c.solver << " points=";
    for (size_t i = 0; i < c.xs.size(); ++i)
      out << "(" << fmt_double(c.xs[i]) << "," << fmt_double(c.ys[i]) << ")";
    out << " -->\n";
  }
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
      << H - MB << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    out << "<text x=\"" << ML - 8 << "\" y=\"" << py(y) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_tau(y) << "</text>\n";
  }
  out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << 22
      << "\" font-size=\"14\" text-anchor=\"middle\">" << title << "</text>\n";

  int ci = 0;
  for (const auto& c : curves) {
    const char* col = colors[ci % 5];
    std::ostringstream pts;
    double last_y = 0.0;
    pts << px(xmin) << "," << py(0.0);
    for (size_t i = 0; i < c.xs.size(); ++i) {
      const double x = std::min(c.xs[i], xmax);
      pts << " " << px(x) << "," << py(last_y);
      pts << " " << px(x) << "," << py(c.ys[i]);
      last_y = c.ys[i];
    }
    pts << " " << px(xmax) << "," << py(last_y);
    out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    out << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 16 + 16 * ci
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << col << "\">" << c.solver
        << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
  result.written_files.push_back(path);
}

}  // namespace

void emit_profiles(const std::vector<RunRecord>& records, const std::vector<double>& taus,
                   const std::string& out_dir, SuiteResult& result) {
  fs::create_directories(out_dir);
  std::vector<std::string> solvers;
  group_records(records, solvers);

  nlohmann::ordered_json robustness = nlohmann::ordered_json::object();
  for (double tau : taus) {
    const std::string ts = fmt_tau(tau);
    if (solvers.size() >= 2) {
      std::vector<CellStat> cells;
      auto curves = performance_profile(records, tau, &result.warnings, &cells);
      write_csv(out_dir + "/perf_tau" + ts + ".csv", cells, tau, result);
      write_svg(out_dir + "/perf_tau" + ts + ".svg", curves,
                "Performance profile, tau=" + ts, "alpha (log scale)", true, result);
    } else {
      result.warnings.push_back("single solver: performance profile skipped for tau=" + ts);
    }
    std::vector<CellStat> cells;
    auto curves = data_profile(records, tau, &cells);
    write_csv(out_dir + "/data_tau" + ts + ".csv", cells, tau, result);
    write_svg(out_dir + "/data_tau" + ts + ".svg", curves, "Data profile, tau=" + ts,
              "kappa (simplex gradients)", false, result);

    // Robustness flag: does fast-csdfn solve at least as many problems as
    // csdfn within the budget?
    const ProfileCurve* fast = nullptr;
    const ProfileCurve* base = nullptr;
    for (const auto& c : curves) {
      if (c.solver == "fast-csdfn") fast = &c;
      if (c.solver == "csdfn") base = &c;
    }
    if (fast && base) {
      const double ff = fast->ys.empty() ? 0.0 : fast->ys.back();
      const double fb = base->ys.empty() ? 0.0 : base->ys.back();
      robustness[ts] = {{"fast_csdfn_final", ff},
                        {"csdfn_final", fb},
                        {"fast_at_least_as_robust", ff >= fb}};
      if (ff < fb)
        result.warnings.push_back("fast-csdfn less robust than csdfn at tau=" + ts);
    }
  }

  // Manifest
  nlohmann::ordered_json manifest;
  nlohmann::ordered_json grid = nlohmann::json::array();
  std::set<std::pair<std::string, int>> probs;
  for (const auto& r : records) probs.insert({r.problem, r.n});
  for (const auto& [p, n] : probs) grid.push_back({{"problem", p}, {"n", n}});
  manifest["grid"] = grid;
  manifest["solvers"] = solvers;
  manifest["taus"] = nlohmann::json::array();
  for (double tau : taus) manifest["taus"].push_back(fmt_tau(tau));
  std::set<unsigned> seeds;
  for (const auto& r : records) seeds.insert(r.seed);
  manifest["seeds"] = seeds;
  std::ostringstream cfgkey;
  for (const auto& r : records)
    cfgkey << r.problem << r.n << r.solver << r.config.theta << r.config.eta << r.config.budget
           << r.config.seed;
  char hash_hex[20];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016zx", std::hash<std::string>{}(cfgkey.str()));
  manifest["config_hash"] = hash_hex;
  manifest["robustness"] = robustness;
  manifest["warnings"] = result.warnings;

  const std::string mpath = out_dir + "/manifest.json";
  std::ofstream mout(mpath, std::ios::binary);
  mout << manifest.dump(2) << "\n";
  result.manifest_path = mpath;
  result.written_files.push_back(mpath);
}

std::vector<RunRecord> load_bundle(const std::string& bundle_dir) {
  const fs::path rec_dir = fs::path(bundle_dir) / "records";
  if (!fs::is_directory(rec_dir))
    throw std::runtime_error("bundle has no records directory: " + rec_dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(rec_dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<RunRecord> records;
  std::vector<std::string> bad;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      records.push_back(record_from_json(buf.str()));
    } catch (const std::exception&) {
      bad.push_back(f.string());
    }
  }
  if (!bad.empty()) {
    std::string msg = "corrupt records:";
    for (const auto& b : bad) msg += " " + b;
    throw std::runtime_error(msg);
  }
  if (records.empty()) throw std::runtime_error("bundle contains no records");
  return records;
}

SuiteResult run_suite(const SuiteSpec& spec) {
  if (spec.problems.empty() || spec.solvers.empty())
    throw std::invalid_argument("run_suite: empty grid");
  SuiteResult result;

  struct Cell {
    std::string problem;
    int n;
    std::string solver;
  };
  std::vector<Cell> cells;
  for (const auto& [p, n] : spec.problems)
    for (const auto& s : spec.solvers) cells.push_back({p, n, s});

  std::vector<RunRecord> records(cells.size());
  std::vector<std::string> failures(cells.size());

#ifdef _OPENMP
  omp_set_num_threads(std::max(1, spec.jobs));
#pragma omp parallel for schedule(dynamic)
#endif
  for (long ci = 0; ci < long(cells.size()); ++ci) {
    const auto& cell = cells[ci];
    try {
      const ObjectiveProblem problem = registry_get(cell.problem, cell.n);
      SolverConfig cfg = spec.config;
      if (cfg.budget <= 0) cfg.budget = 20000 * std::int64_t(cell.n);
      records[ci] = cell.solver == "csdfn" ? run_csdfn(problem, cfg)
                                           : run_fast_csdfn(problem, cfg);
    } catch (const std::exception& e) {
      failures[ci] = e.what();
    }
  }

  // Drop problems with failed cells; keep the rest.
  std::set<std::string> bad_problems;
  for (size_t i = 0; i < cells.size(); ++i)
    if (!failures[i].empty()) {
      bad_problems.insert(cells[i].problem + ":" + std::to_string(cells[i].n));
      result.warnings.push_back("run failed for " + cells[i].problem + " x " + cells[i].solver +
                                ": " + failures[i]);
    }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (failures[i].empty() &&
        !bad_problems.count(cells[i].problem + ":" + std::to_string(cells[i].n)))
      result.records.push_back(std::move(records[i]));
  }
  if (result.records.empty()) throw std::runtime_error("run_suite: every cell failed");

  const fs::path rec_dir = fs::path(spec.out_dir) / "records";
  fs::create_directories(rec_dir);
  for (const auto& r : result.records) {
    const fs::path p =
        rec_dir / (r.problem + "-" + std::to_string(r.n) + "-" + r.solver + ".json");
    std::ofstream out(p, std::ios::binary);
    out << record_to_json(r) << "\n";
    result.written_files.push_back(p.string());
  }

  emit_profiles(result.records, spec.taus, spec.out_dir, result);
  return result;
}

SuiteResult recompute_profiles(const std::string& bundle_dir, const std::vector<double>& taus) {
  SuiteResult result;
  result.records = load_bundle(bundle_dir);
  emit_profiles(result.records, taus, bundle_dir, result);
  return result;
}

}  // namespace nsdfo
