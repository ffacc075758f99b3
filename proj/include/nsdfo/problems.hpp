#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nsdfo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A named black-box objective f: R^n -> R with its literature start point.
struct ObjectiveProblem {
  std::string name;
  int dim = 0;
  Vec start_point;
  std::optional<double> known_optimum;
  std::function<double(const Vec&)> fn;

  double evaluate(const Vec& x) const { return fn(x); }
};

/// Thrown when a counted evaluation would exceed the configured budget.
struct BudgetExhausted : std::runtime_error {
  BudgetExhausted() : std::runtime_error("function evaluation budget exhausted") {}
};

/// Counts objective evaluations and keeps the eval-indexed best-value history.
/// One counter per solver run; never shared.
class EvalCounter {
 public:
  EvalCounter() = default;
  explicit EvalCounter(std::int64_t budget) : budget_(budget) {}

  std::int64_t count() const { return count_; }
  std::int64_t budget() const { return budget_; }
  double best() const { return best_; }
  const std::vector<std::pair<std::int64_t, double>>& history() const { return history_; }

  void record(double value) {
    ++count_;
    if (history_.empty() || value < best_) {
      best_ = value;
      history_.emplace_back(count_, value);
    }
  }

  bool budget_left() const { return budget_ <= 0 || count_ < budget_; }

 private:
  std::int64_t count_ = 0;
  std::int64_t budget_ = 0;  // 0 = unlimited
  double best_ = 0.0;
  std::vector<std::pair<std::int64_t, double>> history_;
};

/// Evaluates the problem at x while updating the counter. Throws
/// BudgetExhausted if the counter's budget is already spent.
double evaluate_counted(const ObjectiveProblem& problem, EvalCounter& counter, const Vec& x);

struct ProblemInfo {
  std::string name;
  std::string dims;  // human-readable legal dimensions
  bool scalable = false;
  std::optional<double> fstar;
};

/// Names and dimension rules of all registered problems.
std::vector<ProblemInfo> registry_list();

/// Looks up a problem by name and instantiates it at dimension n.
/// Throws std::out_of_range for unknown names (the message lists the
/// available ones) and std::invalid_argument for illegal dimensions.
ObjectiveProblem registry_get(const std::string& name, int n);

}  // namespace nsdfo
