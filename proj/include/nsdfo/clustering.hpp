#pragma once

#include <Eigen/Core>

#include <vector>

#include "nsdfo/problems.hpp"  // Vec, Mat

namespace nsdfo {

/// A sampled direction together with its difference quotient
/// (f(x + alpha d) - f(x)) / alpha.
struct SamplePair {
  Vec d;
  double s = 0.0;
};

using SampleSet = std::vector<SamplePair>;

struct ClusterModel {
  std::vector<Vec> generators;              // v_hat_j
  std::vector<std::vector<int>> assignments;  // I_j, a partition of 0..r-1
  std::vector<double> residuals;            // phi_j
  double total_residual = 0.0;
  std::vector<double> objective_history;    // clustering objective per round
};

/// Assigns every sample to the generator with the smallest squared residual
/// (d_i^T v - s_i)^2; ties go to the lowest cluster index.
std::vector<std::vector<int>> assign(const SampleSet& samples,
                                     const std::vector<Vec>& generators);

/// Minimum-norm least-squares fit of one generator to the subset's
/// direction/quotient rows. Empty subset yields (0, 0).
std::pair<Vec, double> fit_generator(const SampleSet& samples, const std::vector<int>& subset,
                                     int dim);

/// Alternating assign/fit from a given initial partition, at most h_max
/// rounds, with early exit once the partition stabilizes.
ClusterModel kmeans_from_partition(const SampleSet& samples,
                                   const std::vector<std::vector<int>>& partition, int h_max);

/// K-means-type clustering of r samples into p generators. Restart 0 starts
/// from the round-robin partition by sample order; further restarts use
/// seeded random partitions into p nonempty groups. The lowest-residual model
/// wins, ties broken by earliest restart.
ClusterModel kmeans_directional(const SampleSet& samples, int p, int h_max, unsigned seed,
                                int n_restarts = 5);

}  // namespace nsdfo
