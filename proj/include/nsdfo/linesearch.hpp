#pragma once

#include "nsdfo/clustering.hpp"
#include "nsdfo/problems.hpp"

namespace nsdfo {

struct LineSearchConfig {
  double gamma = 1e-6;     // sufficient-decrease coefficient
  double delta = 0.5;      // extrapolation divisor
  double alpha_max = 1e3;  // expansion cap
};

struct LineSearchResult {
  double alpha = 0.0;     // accepted step, 0 on double failure
  Vec direction;          // p+ = +/-p
  SampleSet samples;      // G+: empty on success, G plus two pairs on failure
  int evals_used = 0;
  double f_new = 0.0;     // f at the accepted point, valid when alpha > 0
  bool hit_alpha_max = false;
};

/// Derivative-free sufficient-decrease search along +/-p with geometric
/// extrapolation. Tests f(y + alpha p) <= f(y) - gamma alpha^2 at
/// alpha = alpha_tilde along +p then -p; on double failure returns alpha = 0
/// and appends the two difference quotients to G. On success extrapolates
/// beta = alpha/delta while the test holds and beta <= alpha_max. f(y) is
/// the caller-cached value f_y and is never re-evaluated.
LineSearchResult continuous_search(double alpha_tilde, const Vec& y, const Vec& p, double f_y,
                                   const SampleSet& G, const LineSearchConfig& cfg,
                                   const ObjectiveProblem& problem, EvalCounter& counter);

}  // namespace nsdfo
