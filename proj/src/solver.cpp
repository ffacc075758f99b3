#include "nsdfo/solver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsdfo/dense_directions.hpp"
#include "nsdfo/direction.hpp"

namespace nsdfo {

void SolverConfig::validate() const {
  if (!(theta > 0 && theta < 1)) throw std::invalid_argument("config: theta must be in (0,1)");
  if (!(eta > 0)) throw std::invalid_argument("config: eta must be positive");
  if (!(gamma > 0)) throw std::invalid_argument("config: gamma must be positive");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("config: delta must be in (0,1)");
  if (!(alpha_max > 0)) throw std::invalid_argument("config: alpha_max must be positive");
  if (!(alpha0_dense > 0)) throw std::invalid_argument("config: alpha0_dense must be positive");
  if (h_max < 1) throw std::invalid_argument("config: h_max must be >= 1");
  if (budget < 0) throw std::invalid_argument("config: budget must be >= 0");
  if (!(stop_alpha > 0)) throw std::invalid_argument("config: stop_alpha must be positive");
}

SpdMetric build_metric(const Vec& curvature, MetricMode mode) {
  const int n = int(curvature.size());
  if (mode == MetricMode::Identity) return SpdMetric::identity(n);
  Mat B = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) B(i, i) = std::clamp(curvature[i], 1e-6, 1e6);
  return SpdMetric(B);
}

namespace {

// Samples accumulated since the last successful step can grow across many
// stalled iterations; only the most recent window feeds the clustering.
SampleSet recent_window(const SampleSet& G, int cap) {
  if (int(G.size()) <= cap) return G;
  return SampleSet(G.end() - cap, G.end());
}

RunRecord run_csdfn_impl(const ObjectiveProblem& problem, const SolverConfig& cfg,
                         bool use_clustering) {
  cfg.validate();
  const int n = problem.dim;

  RunRecord rec;
  rec.problem = problem.name;
  rec.solver = use_clustering ? "fast-csdfn" : "csdfn";
  rec.n = n;
  rec.seed = cfg.seed;
  rec.config = cfg;

  EvalCounter counter(cfg.budget);
  LineSearchConfig ls{cfg.gamma, cfg.delta, cfg.alpha_max};

  Vec x = problem.start_point;
  Vec coord_step(n), coord_sign = Vec::Ones(n);
  for (int i = 0; i < n; ++i) coord_step[i] = std::max(1.0, std::abs(x[i]));
  double dense_step = cfg.alpha0_dense;
  Vec curvature = Vec::Ones(n);
  SampleSet G;

  double f_x = 0.0;
  rec.reason = "stepsize";
  try {
    f_x = evaluate_counted(problem, counter, x);
    for (long k = 0;; ++k) {
      Vec y = x;
      double f_y = f_x;
      SampleSet G_cur = G;
      Vec realized = Vec::Zero(n);             // alpha_k^i
      const Vec coord_step_at_entry = coord_step;  // alpha~_k^i, pre-update
      const double dense_step_at_entry = dense_step;

      for (int i = 0; i < n; ++i) {
        Vec p = Vec::Zero(n);
        p[i] = coord_sign[i];
        auto res = continuous_search(coord_step[i], y, p, f_y, G_cur, ls, problem, counter);
        if (res.alpha > 0) {
          realized[i] = res.alpha;
          coord_step[i] = res.alpha;
          coord_sign[i] = res.direction[i];
          y += res.alpha * res.direction;
          f_y = res.f_new;
          G_cur.clear();
        } else {
          coord_step[i] *= cfg.theta;
          // The two freshly appended quotients give a central second
          // difference along e_i, reused for the diagonal metric.
          const double sp = res.samples[res.samples.size() - 2].s;
          const double sm = res.samples[res.samples.size() - 1].s;
          curvature[i] = (sp + sm) / coord_step_at_entry[i];
          G_cur = std::move(res.samples);
        }
      }

      const double trigger =
          std::max(realized.maxCoeff(), coord_step_at_entry.maxCoeff());
      if (trigger <= cfg.eta) {
        const Vec dk = dense_direction(k, n);
        auto res = continuous_search(dense_step, y, dk, f_y, G_cur, ls, problem, counter);
        if (res.alpha > 0) {
          dense_step = res.alpha;
          y += res.alpha * res.direction;
          f_y = res.f_new;
          G_cur.clear();
        } else {
          dense_step *= cfg.theta;
          G_cur = std::move(res.samples);
        }

        if (use_clustering && int(G_cur.size()) >= 2) {
          const SpdMetric B = build_metric(curvature, cfg.metric_mode);
          const SampleSet window = recent_window(G_cur, 6 * n);
          const double eps = cfg.epsilon_cluster > 0 ? cfg.epsilon_cluster
                                                     : default_cluster_epsilon(window);
          const auto dir = compute_direction(window, B, eps, cfg.h_max, cfg.seed);
          if (dir.found) {
            // As printed, the search along the cluster direction starts from
            // the pre-update dense step.
            auto extra = continuous_search(dense_step_at_entry, y, dir.direction, f_y, G_cur,
                                           ls, problem, counter);
            if (extra.alpha > 0) {
              y += extra.alpha * extra.direction;
              f_y = extra.f_new;
              G_cur.clear();
            }
            // else: the failure pairs from this last search are dropped and
            // G carries over unchanged.
          }
        }
      }

      x = y;
      f_x = f_y;
      G = std::move(G_cur);

      if (std::max(coord_step.maxCoeff(), dense_step) <= cfg.stop_alpha) break;
    }
  } catch (const BudgetExhausted&) {
    rec.reason = "budget";
  }

  rec.history = counter.history();
  rec.final_x = x;
  rec.final_f = counter.history().empty() ? f_x : counter.best();
  return rec;
}

}  // namespace

RunRecord run_fast_csdfn(const ObjectiveProblem& problem, const SolverConfig& config) {
  return run_csdfn_impl(problem, config, true);
}

RunRecord run_csdfn(const ObjectiveProblem& problem, const SolverConfig& config) {
  return run_csdfn_impl(problem, config, false);
}

std::string record_to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["problem"] = r.problem;
  j["solver"] = r.solver;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["config"] = {{"theta", r.config.theta},
                 {"eta", r.config.eta},
                 {"gamma", r.config.gamma},
                 {"delta", r.config.delta},
                 {"alpha_max", r.config.alpha_max},
                 {"alpha0_dense", r.config.alpha0_dense},
                 {"epsilon_cluster", r.config.epsilon_cluster},
                 {"h_max", r.config.h_max},
                 {"seed", r.config.seed},
                 {"budget", r.config.budget},
                 {"stop_alpha", r.config.stop_alpha},
                 {"metric_mode",
                  r.config.metric_mode == MetricMode::Identity ? "identity" : "diagonal-estimate"}};
  auto& hist = j["history"] = nlohmann::json::array();
  for (const auto& [nf, f] : r.history) hist.push_back({nf, f});
  j["final_x"] = std::vector<double>(r.final_x.data(), r.final_x.data() + r.final_x.size());
  j["final_f"] = r.final_f;
  j["reason"] = r.reason;
  return j.dump(2);
}

RunRecord record_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunRecord r;
  r.problem = j.at("problem").get<std::string>();
  r.solver = j.at("solver").get<std::string>();
  r.n = j.at("n").get<int>();
  r.seed = j.at("seed").get<unsigned>();
  const auto& c = j.at("config");
  r.config.theta = c.at("theta").get<double>();
  r.config.eta = c.at("eta").get<double>();
  r.config.gamma = c.at("gamma").get<double>();
  r.config.delta = c.at("delta").get<double>();
  r.config.alpha_max = c.at("alpha_max").get<double>();
  r.config.alpha0_dense = c.at("alpha0_dense").get<double>();
  r.config.epsilon_cluster = c.at("epsilon_cluster").get<double>();
  r.config.h_max = c.at("h_max").get<int>();
  r.config.seed = c.at("seed").get<unsigned>();
  r.config.budget = c.at("budget").get<std::int64_t>();
  r.config.stop_alpha = c.at("stop_alpha").get<double>();
  r.config.metric_mode = c.at("metric_mode").get<std::string>() == "diagonal-estimate"
                             ? MetricMode::DiagonalEstimate
                             : MetricMode::Identity;
  for (const auto& h : j.at("history"))
    r.history.emplace_back(h.at(0).get<std::int64_t>(), h.at(1).get<double>());
  const auto fx = j.at("final_x").get<std::vector<double>>();
  r.final_x = Eigen::Map<const Vec>(fx.data(), long(fx.size()));
  r.final_f = j.at("final_f").get<double>();
  r.reason = j.at("reason").get<std::string>();
  return r;
}

}  // namespace nsdfo
