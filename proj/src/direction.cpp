#include "nsdfo/direction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsdfo {

double default_cluster_epsilon(const SampleSet& samples) {
  double energy = 0.0;
  for (const auto& sp : samples) energy += sp.s * sp.s;
  return 1e-4 * std::max(1.0, energy);
}

DirectionOutcome compute_direction(const SampleSet& samples, const SpdMetric& metric,
                                   double epsilon, int h_max, unsigned seed) {
  if (!(epsilon > 0)) throw std::invalid_argument("compute_direction: epsilon must be positive");
  DirectionOutcome out;
  const int r = int(samples.size());
  const int n = metric.dim();
  out.direction = Vec::Zero(n);
  if (r < 2) return out;
  for (const auto& sp : samples)
    if (sp.d.size() != n)
      throw std::invalid_argument("compute_direction: sample/metric dimension mismatch");

  ClusterModel accepted;
  int p_accepted = 0;
  for (int p = 2; p <= std::min(r, n); ++p) {
    ClusterModel model = kmeans_directional(samples, p, h_max, seed);
    if (model.total_residual < epsilon) {
      accepted = std::move(model);
      p_accepted = p;
    }
  }
  if (p_accepted == 0) return out;

  Mat V(n, p_accepted);
  for (int j = 0; j < p_accepted; ++j) V.col(j) = accepted.generators[j];
  out.xi_star = min_norm_point(V, metric);
  out.p_used = p_accepted;
  out.total_residual = accepted.total_residual;

  if (out.xi_star.point.norm() <= 1e-12) return out;  // estimated stationarity

  Vec d = -metric.solve(out.xi_star.point);
  const double nd = d.norm();
  if (nd <= 1e-300) return out;
  out.direction = d / nd;
  out.found = true;
  return out;
}

}  // namespace nsdfo
