#include "nsdfo/clustering.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace nsdfo {

namespace {

double squared_residual(const SamplePair& sp, const Vec& v) {
  const double r = sp.d.dot(v) - sp.s;
  return r * r;
}

double model_objective(const SampleSet& samples, const std::vector<std::vector<int>>& parts,
                       const std::vector<Vec>& gens) {
  double obj = 0.0;
  for (size_t j = 0; j < parts.size(); ++j)
    for (int i : parts[j]) obj += squared_residual(samples[i], gens[j]);
  return obj;
}

}  // namespace

std::vector<std::vector<int>> assign(const SampleSet& samples,
                                     const std::vector<Vec>& generators) {
  if (generators.empty()) throw std::invalid_argument("assign: no generators");
  std::vector<std::vector<int>> parts(generators.size());
  for (int i = 0; i < int(samples.size()); ++i) {
    int best = 0;
    double best_r = squared_residual(samples[i], generators[0]);
    for (int j = 1; j < int(generators.size()); ++j) {
      const double r = squared_residual(samples[i], generators[j]);
      if (r < best_r) {
        best_r = r;
        best = j;
      }
    }
    parts[best].push_back(i);
  }
  return parts;
}

std::pair<Vec, double> fit_generator(const SampleSet& samples, const std::vector<int>& subset,
                                     int dim) {
  if (subset.empty()) return {Vec::Zero(dim), 0.0};
  Mat D(subset.size(), dim);
  Vec rhs(subset.size());
  for (size_t k = 0; k < subset.size(); ++k) {
    D.row(k) = samples[subset[k]].d.transpose();
    rhs[k] = samples[subset[k]].s;
  }
  // CompleteOrthogonalDecomposition yields the minimum-norm solution for
  // rank-deficient rows, which these systems almost always are (few samples).
  Vec v = D.completeOrthogonalDecomposition().solve(rhs);
  const double phi = (D * v - rhs).squaredNorm();
  return {v, phi};
}

ClusterModel kmeans_from_partition(const SampleSet& samples,
                                   const std::vector<std::vector<int>>& partition, int h_max) {
  if (h_max < 1) throw std::invalid_argument("kmeans_from_partition: h_max must be >= 1");
  const int p = int(partition.size());
  const int dim = samples.empty() ? 0 : int(samples.front().d.size());

  ClusterModel model;
  model.assignments = partition;
  model.generators.assign(p, Vec::Zero(dim));
  model.residuals.assign(p, 0.0);

  for (int h = 0; h < h_max; ++h) {
    for (int j = 0; j < p; ++j) {
      auto [v, phi] = fit_generator(samples, model.assignments[j], dim);
      model.generators[j] = std::move(v);
      model.residuals[j] = phi;
    }
    model.objective_history.push_back(
        std::accumulate(model.residuals.begin(), model.residuals.end(), 0.0));
    auto next = assign(samples, model.generators);
    if (next == model.assignments) break;
    model.assignments = std::move(next);
  }
  // Recompute residuals against the final assignment so the reported fields
  // are mutually consistent.
  for (int j = 0; j < p; ++j) {
    auto [v, phi] = fit_generator(samples, model.assignments[j], dim);
    model.generators[j] = std::move(v);
    model.residuals[j] = phi;
  }
  model.total_residual = std::accumulate(model.residuals.begin(), model.residuals.end(), 0.0);
  if (model.objective_history.empty() ||
      model.total_residual < model.objective_history.back())
    model.objective_history.push_back(model.total_residual);
  return model;
}

ClusterModel kmeans_directional(const SampleSet& samples, int p, int h_max, unsigned seed,
                                int n_restarts) {
  const int r = int(samples.size());
  if (p < 1 || p > r)
    throw std::invalid_argument("kmeans_directional: need 1 <= p <= r, got p=" +
                                std::to_string(p) + ", r=" + std::to_string(r));

  ClusterModel best;
  bool have_best = false;
  std::vector<int> order(r);
  for (int restart = 0; restart < n_restarts; ++restart) {
    std::iota(order.begin(), order.end(), 0);
    if (restart > 0) {
      std::mt19937 rng(seed + unsigned(restart));
      std::shuffle(order.begin(), order.end(), rng);
    }
    // Round-robin over the (possibly shuffled) order; every group nonempty.
    std::vector<std::vector<int>> partition(p);
    for (int i = 0; i < r; ++i) partition[i % p].push_back(order[i]);
    for (auto& part : partition) std::sort(part.begin(), part.end());

    ClusterModel model = kmeans_from_partition(samples, partition, h_max);
    if (!have_best || model.total_residual < best.total_residual) {
      best = std::move(model);
      have_best = true;
    }
  }
  return best;
}

}  // namespace nsdfo
