#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nsdfo/problems.hpp"
#include "nsdfo/profiles.hpp"
#include "nsdfo/solver.hpp"

namespace fs = std::filesystem;
using nsdfo::SolverConfig;

namespace {

// Flat key=value config file mirroring the SolverConfig field names.
void load_config_file(const std::string& path, SolverConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "theta") cfg.theta = std::stod(val);
    else if (key == "eta") cfg.eta = std::stod(val);
    else if (key == "gamma") cfg.gamma = std::stod(val);
    else if (key == "delta") cfg.delta = std::stod(val);
    else if (key == "alpha_max") cfg.alpha_max = std::stod(val);
    else if (key == "alpha0_dense") cfg.alpha0_dense = std::stod(val);
    else if (key == "epsilon_cluster") cfg.epsilon_cluster = std::stod(val);
    else if (key == "h_max") cfg.h_max = std::stoi(val);
    else if (key == "seed") cfg.seed = unsigned(std::stoul(val));
    else if (key == "budget") cfg.budget = std::stoll(val);
    else if (key == "stop_alpha") cfg.stop_alpha = std::stod(val);
    else if (key == "metric_mode")
      cfg.metric_mode = val == "diagonal-estimate" ? nsdfo::MetricMode::DiagonalEstimate
                                                   : nsdfo::MetricMode::Identity;
    else
      throw std::runtime_error(path + ": unknown config key '" + key + "'");
  }
}

std::vector<std::pair<std::string, int>> parse_problem_list(const std::string& arg) {
  std::vector<std::pair<std::string, int>> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--problems", "expected name:dim entries, got '" + item + "'");
    out.emplace_back(item.substr(0, colon), std::stoi(item.substr(colon + 1)));
  }
  return out;
}

std::string resolve_out_dir(const std::string& flag_value) {
  if (const char* env = std::getenv("NSDFO_OUT"); env && *env) return env;
  return flag_value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivative-free solvers for nonsmooth minimization (CS-DFN and Fast-CS-DFN)"};
  app.require_subcommand(1);

  std::string problem_name, solver_name = "fast-csdfn", config_path, out_dir = "out";
  std::string problems_arg =
      "maxq:20,maxl:10,l1hilb:20,crescent:2,demymalo:2,cb2:2";
  std::string bundle_dir;
  int dim = 0, jobs = 1;
  long long budget = 0;
  unsigned seed = 0;
  std::vector<double> taus;
  bool diag_metric = false;

  auto* cmd_problems = app.add_subcommand("problems", "List registered problems as JSON lines");

  auto* cmd_solve = app.add_subcommand("solve", "Run one solver on one problem");
  cmd_solve->add_option("--problem", problem_name, "Problem name")->required();
  cmd_solve->add_option("--dim", dim, "Problem dimension (defaults to the fixed one)");
  cmd_solve->add_option("--solver", solver_name, "fast-csdfn or csdfn")
      ->check(CLI::IsMember({"fast-csdfn", "csdfn"}));
  cmd_solve->add_option("--budget", budget, "Max function evaluations (default 20000*n)");
  cmd_solve->add_option("--seed", seed, "Deterministic seed");
  cmd_solve->add_option("--config", config_path, "Flat key=value config file");
  cmd_solve->add_option("--out", out_dir, "Output directory");
  cmd_solve->add_flag("--diagonal-metric", diag_metric,
                      "Use the diagonal curvature metric instead of identity");

  auto* cmd_bench = app.add_subcommand("bench", "Run the problem x solver grid and emit profiles");
  cmd_bench->add_option("--problems", problems_arg, "Comma list of name:dim entries");
  cmd_bench->add_option("--tau", taus, "Precision levels (default 1e-1 1e-3 1e-5)");
  cmd_bench->add_option("--budget", budget, "Max evals per run (default 20000*n)");
  cmd_bench->add_option("--jobs", jobs, "Parallel workers");
  cmd_bench->add_option("--seed", seed, "Deterministic seed");
  cmd_bench->add_option("--config", config_path, "Flat key=value config file");
  cmd_bench->add_option("--out", out_dir, "Output directory");

  auto* cmd_profiles =
      app.add_subcommand("profiles", "Recompute CSV/SVG profiles from a persisted bundle");
  cmd_profiles->add_option("--bundle", bundle_dir, "Bundle directory")->required();
  cmd_profiles->add_option("--tau", taus, "Precision levels (default 1e-1 1e-3 1e-5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_problems->parsed()) {
      for (const auto& info : nsdfo::registry_list()) {
        nlohmann::ordered_json j;
        j["name"] = info.name;
        j["dims"] = info.dims;
        if (info.fstar)
          j["fstar"] = *info.fstar;
        else
          j["fstar"] = nullptr;
        std::cout << j.dump() << "\n";
      }
      return 0;
    }

    SolverConfig cfg;
    if (!config_path.empty()) load_config_file(config_path, cfg);
    if (cmd_solve->count("--seed") || cmd_bench->count("--seed")) cfg.seed = seed;
    if (cmd_solve->count("--budget") || cmd_bench->count("--budget")) cfg.budget = budget;
    if (diag_metric) cfg.metric_mode = nsdfo::MetricMode::DiagonalEstimate;
    if (taus.empty()) taus = {1e-1, 1e-3, 1e-5};
    const std::string out = resolve_out_dir(out_dir);

    if (cmd_solve->parsed()) {
      nsdfo::ObjectiveProblem problem;
      try {
        if (dim == 0) {
          bool known = false;
          for (const auto& info : nsdfo::registry_list())
            if (info.name == problem_name) {
              known = true;
              if (!info.scalable) dim = std::stoi(info.dims);
            }
          if (known && dim == 0)
            throw std::invalid_argument("problem '" + problem_name +
                                        "' is scalable; pass --dim");
          if (!known) dim = 2;  // let registry_get report the name list
        }
        problem = nsdfo::registry_get(problem_name, dim);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      if (cfg.budget <= 0) cfg.budget = 20000LL * problem.dim;
      const nsdfo::RunRecord rec = solver_name == "csdfn"
                                       ? nsdfo::run_csdfn(problem, cfg)
                                       : nsdfo::run_fast_csdfn(problem, cfg);
      fs::create_directories(out);
      const fs::path path = fs::path(out) / (rec.problem + "-" + std::to_string(rec.n) + "-" +
                                             rec.solver + ".json");
      std::ofstream file(path, std::ios::binary);
      file << nsdfo::record_to_json(rec) << "\n";
      std::cout << "problem  " << rec.problem << " (n=" << rec.n << ")\n"
                << "solver   " << rec.solver << "\n"
                << "final f  " << rec.final_f << "\n"
                << "evals    " << rec.evals() << "\n"
                << "reason   " << rec.reason << "\n"
                << "record   " << path.string() << "\n";
      return 0;
    }

    if (cmd_bench->parsed()) {
      nsdfo::SuiteSpec spec;
      spec.problems = parse_problem_list(problems_arg);
      spec.solvers = {"csdfn", "fast-csdfn"};
      spec.config = cfg;
      spec.taus = taus;
      spec.out_dir = out;
      spec.jobs = jobs;
      const auto result = nsdfo::run_suite(spec);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "wrote " << result.written_files.size() << " files under " << out << "\n"
                << "manifest " << result.manifest_path << "\n";
      return 0;
    }

    if (cmd_profiles->parsed()) {
      const auto result = nsdfo::recompute_profiles(bundle_dir, taus);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "recomputed profiles for " << result.records.size() << " records\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
