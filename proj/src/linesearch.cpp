#include "nsdfo/linesearch.hpp"

#include <cmath>
#include <stdexcept>

namespace nsdfo {

LineSearchResult continuous_search(double alpha_tilde, const Vec& y, const Vec& p, double f_y,
                                   const SampleSet& G, const LineSearchConfig& cfg,
                                   const ObjectiveProblem& problem, EvalCounter& counter) {
  if (!(alpha_tilde > 0))
    throw std::invalid_argument("continuous_search: alpha_tilde must be positive");
  if (std::abs(p.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("continuous_search: direction must be unit norm");

  LineSearchResult out;
  const auto eval = [&](const Vec& x) {
    ++out.evals_used;
    return evaluate_counted(problem, counter, x);
  };
  const auto accepts = [&](double f, double a) { return f <= f_y - cfg.gamma * a * a; };

  double alpha = alpha_tilde;
  const double f_plus = eval(y + alpha * p);
  double f_cur;
  if (accepts(f_plus, alpha)) {
    out.direction = p;
    f_cur = f_plus;
  } else {
    const double f_minus = eval(y - alpha * p);
    if (accepts(f_minus, alpha)) {
      out.direction = -p;
      f_cur = f_minus;
    } else {
      // Double failure: record both quotients at the trial step.
      out.alpha = 0.0;
      out.direction = p;
      out.samples = G;
      out.samples.push_back({p, (f_plus - f_y) / alpha});
      out.samples.push_back({-p, (f_minus - f_y) / alpha});
      return out;
    }
  }

  // Extrapolation.
  while (true) {
    const double beta = alpha / cfg.delta;
    if (beta > cfg.alpha_max) {
      out.hit_alpha_max = true;
      break;
    }
    const double f_beta = eval(y + beta * out.direction);
    if (!accepts(f_beta, beta)) break;
    alpha = beta;
    f_cur = f_beta;
  }
  out.alpha = alpha;
  out.f_new = f_cur;
  return out;
}

}  // namespace nsdfo
