// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Kept independent of the unit-test framework so the output
// is a plain, greppable report.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsdfo/direction.hpp"
#include "nsdfo/linesearch.hpp"
#include "nsdfo/problems.hpp"
#include "nsdfo/profiles.hpp"
#include "nsdfo/simplex_qp.hpp"
#include "nsdfo/solver.hpp"

using namespace nsdfo;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string label) : label_(std::move(label)), start_(clock_::now()) {}

  void expect(bool ok, const std::string& detail) {
    if (!ok) {
      ok_ = false;
      details_.push_back(detail);
    }
  }

  void finish(double time_limit_s) {
    const double secs =
        std::chrono::duration<double>(clock_::now() - start_).count();
    if (time_limit_s > 0 && secs >= time_limit_s) {
      ok_ = false;
      details_.push_back("runtime " + std::to_string(secs) + "s over limit " +
                         std::to_string(time_limit_s) + "s");
    }
    std::printf("[%s] %s (%.2fs)\n", ok_ ? "PASS" : "FAIL", label_.c_str(), secs);
    for (const auto& d : details_) std::printf("       - %s\n", d.c_str());
    if (!ok_) ++g_failures;
  }

 private:
  using clock_ = std::chrono::steady_clock;
  std::string label_;
  clock_::time_point start_;
  bool ok_ = true;
  std::vector<std::string> details_;
};

Vec unit(int n, int i, double sign = 1.0) {
  Vec v = Vec::Zero(n);
  v[i] = sign;
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------

void criterion1_golden_direction() {
  Criterion c("1 golden direction example (n=5)");
  const int n = 5;
  SampleSet G;
  for (int i = 0; i < n; ++i) {
    G.push_back({unit(n, i), 1.0});
    G.push_back({unit(n, i, -1.0), 0.0});
  }
  auto out = compute_direction(G, SpdMetric::identity(n), 1e-6, 20, 0);
  c.expect(out.found, "direction not found");
  if (out.found) {
    for (int i = 0; i < n; ++i) {
      c.expect(std::abs(out.xi_star.point[i] - 0.2) <= 1e-8,
               "xi*[" + std::to_string(i) + "] != 1/5");
      c.expect(std::abs(out.direction[i] + 1.0 / std::sqrt(5.0)) <= 1e-8,
               "d[" + std::to_string(i) + "] != -1/sqrt(5)");
    }
    auto maxl = registry_get("maxl", n);
    const Vec xbar = Vec::Ones(n);
    c.expect(maxl.evaluate(xbar + 0.1 * out.direction) < maxl.evaluate(xbar),
             "no actual descent on maxl at e with t=0.1");
  }
  c.finish(1.0);
}

void criterion2_min_norm_certification() {
  Criterion c("2 min-norm QP certification (200 random instances)");
  std::mt19937 rng(2024);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + int(rng() % 5);
    const int p = 1 + int(rng() % 6);
    Mat V(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) V(i, j) = g(rng);
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = g(rng);
    SpdMetric B(Mat(A * A.transpose() + 0.1 * Mat::Identity(n, n)));

    auto res = min_norm_point(V, B);
    const Vec Binv_xi = B.solve(res.point);
    for (int j = 0; j < p; ++j)
      c.expect(Binv_xi.dot(V.col(j) - res.point) >= -1e-8,
               "vertex inequality violated at rep " + std::to_string(rep));

    if (p <= 3) {
      const Mat Q = V.transpose() * B.solve(V);
      double best = 1e300;
      const int m = 1000;
      auto obj = [&](const Vec& l) { return l.dot(Q * l); };
      if (p == 1) {
        best = obj(Vec::Ones(1));
      } else if (p == 2) {
        for (int i = 0; i <= m; ++i) {
          Vec l(2);
          l << double(i) / m, 1.0 - double(i) / m;
          best = std::min(best, obj(l));
        }
      } else {
        for (int i = 0; i <= m; ++i)
          for (int j = 0; j <= m - i; ++j) {
            Vec l(3);
            l << double(i) / m, double(j) / m, 1.0 - double(i + j) / m;
            best = std::min(best, obj(l));
          }
      }
      c.expect(std::abs(res.objective - best) <= 1e-4,
               "grid-oracle mismatch at rep " + std::to_string(rep));
    }
  }
  c.finish(30.0);
}

void criterion3_linesearch_contract() {
  Criterion c("3 linesearch contract (500 randomized cases)");
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> ustep(1e-3, 2.0);
  std::normal_distribution<double> g;
  const std::vector<std::pair<std::string, int>> pool = {
      {"maxq", 6},     {"maxl", 6},  {"cb2", 2},  {"crescent", 2}, {"demymalo", 2},
      {"l1hilb", 5},   {"shor", 5},  {"cb3", 2},  {"maxquad", 10}, {"wong1", 7}};
  LineSearchConfig cfg{1e-6, 0.5, 1e3};
  for (int rep = 0; rep < 500; ++rep) {
    const auto& [name, n] = pool[rep % pool.size()];
    auto problem = registry_get(name, n);
    Vec y = problem.start_point;
    for (int i = 0; i < n; ++i) y[i] += g(rng);
    Vec p(n);
    for (int i = 0; i < n; ++i) p[i] = g(rng);
    p.normalize();
    const double alpha_tilde = ustep(rng);
    EvalCounter counter;
    const double f_y = problem.evaluate(y);
    auto res = continuous_search(alpha_tilde, y, p, f_y, {}, cfg, problem, counter);
    if (res.alpha > 0.0) {
      const double f_end = problem.evaluate(y + res.alpha * res.direction);
      c.expect(f_end <= f_y - cfg.gamma * res.alpha * res.alpha,
               "insufficient decrease at rep " + std::to_string(rep));
      c.expect(res.samples.empty(), "samples on success at rep " + std::to_string(rep));
    } else {
      bool ok = res.samples.size() == 2;
      if (ok) {
        const double sp = (problem.evaluate(y + alpha_tilde * p) - f_y) / alpha_tilde;
        const double sm = (problem.evaluate(y - alpha_tilde * p) - f_y) / alpha_tilde;
        ok = res.samples[0].s == sp && res.samples[1].s == sm &&
             (res.samples[0].d - p).norm() == 0.0 && (res.samples[1].d + p).norm() == 0.0;
      }
      c.expect(ok, "failure bookkeeping wrong at rep " + std::to_string(rep));
    }
  }
  c.finish(60.0);
}

void criterion4_clustering_monotone() {
  Criterion c("4 clustering monotonicity + zero-residual recovery");
  std::mt19937 rng(77);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + int(rng() % 5);
    const int r = 4 + int(rng() % 12);
    SampleSet G;
    for (int i = 0; i < r; ++i) {
      Vec d(n);
      for (int j = 0; j < n; ++j) d[j] = g(rng);
      d.normalize();
      G.push_back({d, g(rng)});
    }
    const int p = 1 + int(rng() % std::min(4, r));
    // Exercise the alternation from several explicit starting partitions so
    // every restart's rounds are checked, not just the winner's.
    for (int restart = 0; restart < 5; ++restart) {
      std::vector<std::vector<int>> parts(p);
      for (int i = 0; i < r; ++i) parts[(i + restart) % p].push_back(i);
      auto model = kmeans_from_partition(G, parts, 20);
      for (size_t h = 1; h < model.objective_history.size(); ++h)
        c.expect(model.objective_history[h] <= model.objective_history[h - 1] + 1e-12,
                 "objective increased at rep " + std::to_string(rep));
    }
    auto best = kmeans_directional(G, p, 20, unsigned(rep));
    for (size_t h = 1; h < best.objective_history.size(); ++h)
      c.expect(best.objective_history[h] <= best.objective_history[h - 1] + 1e-12,
               "winner objective increased at rep " + std::to_string(rep));
  }

  // Zero-residual recovery: samples generated exactly by p hidden generators.
  std::mt19937 rng2(8);
  const int n = 4, p = 3, per = 5;
  std::vector<Vec> truth(p);
  for (int j = 0; j < p; ++j) {
    truth[j] = Vec(n);
    for (int i = 0; i < n; ++i) truth[j][i] = 3.0 * g(rng2);
  }
  SampleSet G;
  std::vector<std::vector<int>> partition(p);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < per; ++k) {
      Vec d(n);
      for (int i = 0; i < n; ++i) d[i] = g(rng2);
      d.normalize();
      G.push_back({d, d.dot(truth[j])});
      partition[j].push_back(int(G.size()) - 1);
    }
  auto model = kmeans_from_partition(G, partition, 20);
  c.expect(model.total_residual <= 1e-20,
           "recovery residual " + std::to_string(model.total_residual));
  c.finish(0.0);
}

// Criteria 5 and 6 share one benchmark run.
void criteria5_6_convergence_and_robustness(const fs::path& work) {
  Criterion c5("5 convergence to known optima (6 problems, both solvers)");

  SuiteSpec spec;
  spec.problems = {{"maxq", 20}, {"maxl", 10},    {"l1hilb", 20},
                   {"crescent", 2}, {"demymalo", 2}, {"cb2", 2}};
  spec.solvers = {"fast-csdfn", "csdfn"};
  spec.taus = {1e-3};
  spec.out_dir = (work / "suite").string();
  spec.jobs = 4;  // cells are independent; budget per cell is 20000*n
  auto res = run_suite(spec);

  for (const auto& r : res.records) {
    const auto problem = registry_get(r.problem, r.n);
    const double fstar = problem.known_optimum.value();
    const double bound = fstar + 1e-3 * (1.0 + std::abs(fstar));
    c5.expect(r.final_f <= bound,
              r.solver + " on " + r.problem + "(" + std::to_string(r.n) + "): f=" +
                  std::to_string(r.final_f) + " > " + std::to_string(bound));
  }
  c5.expect(res.records.size() == spec.problems.size() * 2, "missing grid cells");
  c5.finish(600.0);

  Criterion c6("6 improvement signal: fast at least as robust at tau=1e-3");
  auto curves = data_profile(res.records, 1e-3);
  double ff = 0.0, fb = 0.0;
  for (const auto& cu : curves) {
    const double fin = cu.ys.empty() ? 0.0 : cu.ys.back();
    if (cu.solver == "fast-csdfn") ff = fin;
    if (cu.solver == "csdfn") fb = fin;
  }
  c6.expect(ff >= fb, "fast-csdfn final data-profile value " + std::to_string(ff) +
                          " < csdfn " + std::to_string(fb));
  const std::string manifest = slurp(res.manifest_path);
  c6.expect(manifest.find("fast_at_least_as_robust") != std::string::npos,
            "manifest missing the robustness flag");
  c6.finish(0.0);
}

void criterion7_profile_oracle() {
  Criterion c("7 profile oracle: hand-built 2x2 fixture, exact equality");
  auto mk = [](const std::string& problem, const std::string& solver, int n,
               std::vector<std::pair<std::int64_t, double>> history) {
    RunRecord r;
    r.problem = problem;
    r.solver = solver;
    r.n = n;
    r.history = std::move(history);
    r.final_x = Vec::Zero(n);
    r.final_f = r.history.back().second;
    r.reason = "stepsize";
    return r;
  };
  // t = [[10, 20], [30, 15]] with n = 9 on both problems.
  std::vector<RunRecord> recs = {
      mk("p1", "A", 9, {{1, 10.0}, {10, 0.0}}),
      mk("p1", "B", 9, {{1, 10.0}, {20, 0.0}}),
      mk("p2", "A", 9, {{1, 10.0}, {30, 0.0}}),
      mk("p2", "B", 9, {{1, 10.0}, {15, 0.0}}),
  };
  auto perf = performance_profile(recs, 0.1);
  auto data = data_profile(recs, 0.1);
  const ProfileCurve *pa = nullptr, *pb = nullptr, *da = nullptr, *db = nullptr;
  for (const auto& cu : perf) (cu.solver == "A" ? pa : pb) = &cu;
  for (const auto& cu : data) (cu.solver == "A" ? da : db) = &cu;
  c.expect(pa && pb && da && db, "missing curves");
  if (pa && pb && da && db) {
    c.expect(pa->xs == std::vector<double>{1.0, 2.0} && pa->ys == std::vector<double>{0.5, 1.0},
             "perf curve A wrong");
    c.expect(pb->xs == std::vector<double>{1.0, 2.0} && pb->ys == std::vector<double>{0.5, 1.0},
             "perf curve B wrong");
    c.expect(da->xs == std::vector<double>{1.0, 3.0} && da->ys == std::vector<double>{0.5, 1.0},
             "data curve A wrong");
    c.expect(db->xs == std::vector<double>{1.5, 2.0} && db->ys == std::vector<double>{0.5, 1.0},
             "data curve B wrong");
  }
  c.finish(0.0);
}

void criterion8_determinism(const fs::path& work) {
  Criterion c("8 determinism: repeated bench runs are byte-identical");
  SuiteSpec spec;
  spec.problems = {{"demymalo", 2}, {"cb2", 2}, {"crescent", 2}};
  spec.solvers = {"fast-csdfn", "csdfn"};
  spec.config.budget = 5000;
  spec.taus = {1e-1, 1e-3};
  spec.jobs = 4;

  spec.out_dir = (work / "bench_a").string();
  run_suite(spec);
  spec.out_dir = (work / "bench_b").string();
  run_suite(spec);

  for (const char* name : {"perf_tau0.1.csv", "perf_tau0.001.csv", "data_tau0.1.csv",
                           "data_tau0.001.csv", "manifest.json"}) {
    const std::string a = slurp(work / "bench_a" / name);
    const std::string b = slurp(work / "bench_b" / name);
    c.expect(!a.empty() && a == b, std::string(name) + " differs between runs");
  }
  c.finish(0.0);
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "nsdfo_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  criterion1_golden_direction();
  criterion2_min_norm_certification();
  criterion3_linesearch_contract();
  criterion4_clustering_monotone();
  criteria5_6_convergence_and_robustness(work);
  criterion7_profile_oracle();
  criterion8_determinism(work);

  fs::remove_all(work);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
