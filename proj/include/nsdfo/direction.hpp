#pragma once

#include "nsdfo/clustering.hpp"
#include "nsdfo/simplex_qp.hpp"

namespace nsdfo {

struct DirectionOutcome {
  bool found = false;
  Vec direction;          // unit norm when found, zero otherwise
  MinNormResult xi_star;  // accepted min-norm point (valid when a p qualified)
  int p_used = 0;
  double total_residual = 0.0;
};

/// Scale-aware default acceptance threshold for the cluster residual.
double default_cluster_epsilon(const SampleSet& samples);

/// Sweeps cluster counts p = 2..min(r, n); every p whose clustering residual
/// falls below epsilon updates the candidate model, and the last qualifying
/// one is kept. Extracts the search direction -B^{-1} xi* / ||B^{-1} xi*||
/// from the min-norm point over the generators' convex hull. Reports
/// found=false when no p qualifies, r < 2, or the accepted min-norm point is
/// (numerically) zero, i.e. the model estimates stationarity.
DirectionOutcome compute_direction(const SampleSet& samples, const SpdMetric& metric,
                                   double epsilon, int h_max, unsigned seed);

}  // namespace nsdfo
