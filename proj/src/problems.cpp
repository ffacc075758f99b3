#include "nsdfo/problems.hpp"

#include <cmath>
#include <sstream>

namespace nsdfo {

double evaluate_counted(const ObjectiveProblem& problem, EvalCounter& counter, const Vec& x) {
  if (x.size() != problem.dim) {
    throw std::invalid_argument("evaluate_counted: x has " + std::to_string(x.size()) +
                                " entries, problem '" + problem.name + "' expects " +
                                std::to_string(problem.dim));
  }
  if (!counter.budget_left()) throw BudgetExhausted{};
  const double v = problem.evaluate(x);
  counter.record(v);
  return v;
}

namespace {

// Start point x0_i = i for the first half of the coordinates, -i for the
// rest. This is the convention of the scalable problems in the collections
// cited alongside maxq/maxl; documented here since the original experiments
// do not list start points.
Vec alternating_ramp_start(int n) {
  Vec x0(n);
  for (int i = 0; i < n; ++i) x0[i] = (i < n / 2) ? double(i + 1) : -double(i + 1);
  return x0;
}

double maxq(const Vec& x) {
  double m = 0.0;
  for (int i = 0; i < x.size(); ++i) m = std::max(m, x[i] * x[i]);
  return m;
}

double maxl(const Vec& x) { return x.cwiseAbs().maxCoeff(); }

double l1hilb(const Vec& x) {
  const int n = int(x.size());
  double f = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += x[j] / double(i + j + 1);
    f += std::abs(row);
  }
  return f;
}

double crescent(const Vec& x) {
  const double a = x[0] * x[0] + (x[1] - 1.0) * (x[1] - 1.0) + x[1] - 1.0;
  const double b = -x[0] * x[0] - (x[1] - 1.0) * (x[1] - 1.0) + x[1] + 1.0;
  return std::max(a, b);
}

double demymalo(const Vec& x) {
  return std::max({5.0 * x[0] + x[1], -5.0 * x[0] + x[1],
                   x[0] * x[0] + x[1] * x[1] + 4.0 * x[1]});
}

double cb2(const Vec& x) {
  return std::max({x[0] * x[0] + x[1] * x[1] * x[1] * x[1],
                   (2.0 - x[0]) * (2.0 - x[0]) + (2.0 - x[1]) * (2.0 - x[1]),
                   2.0 * std::exp(x[1] - x[0])});
}

// Chained CB3; with n=2 this reduces to the classic cb3 term.
double cb3(const Vec& x) {
  double f = 0.0;
  for (int i = 0; i + 1 < x.size(); ++i) {
    const double a = std::pow(x[i], 4) + x[i + 1] * x[i + 1];
    const double b = (2.0 - x[i]) * (2.0 - x[i]) + (2.0 - x[i + 1]) * (2.0 - x[i + 1]);
    const double c = 2.0 * std::exp(x[i + 1] - x[i]);
    f += std::max({a, b, c});
  }
  return f;
}

// Shor's piecewise quadratic, n=5.
const double kShorA[10][5] = {
    {0, 0, 0, 0, 0}, {2, 1, 1, 1, 3}, {1, 2, 1, 1, 2}, {1, 4, 1, 2, 2},
    {3, 2, 1, 0, 1}, {0, 2, 1, 0, 1}, {1, 1, 1, 1, 1}, {1, 0, 1, 2, 1},
    {0, 0, 2, 1, 0}, {1, 1, 2, 0, 0}};
const double kShorB[10] = {1, 5, 10, 2, 4, 3, 1.7, 2.5, 6, 3.5};

double shor(const Vec& x) {
  double f = -1e300;
  for (int i = 0; i < 10; ++i) {
    double s = 0.0;
    for (int j = 0; j < 5; ++j) {
      const double t = x[j] - kShorA[i][j];
      s += t * t;
    }
    f = std::max(f, kShorB[i] * s);
  }
  return f;
}

// Lemarechal's maxquad: max of five quadratics with trigonometric data.
struct MaxquadData {
  Mat A[5];
  Vec b[5];
  MaxquadData() {
    const int n = 10;
    for (int k = 1; k <= 5; ++k) {
      Mat& M = A[k - 1];
      M.setZero(n, n);
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          M(i - 1, j - 1) = std::exp(double(i) / j) * std::cos(double(i) * j) * std::sin(double(k));
          M(j - 1, i - 1) = M(i - 1, j - 1);
        }
      for (int i = 1; i <= n; ++i) {
        double off = 0.0;
        for (int j = 1; j <= n; ++j)
          if (j != i) off += std::abs(M(i - 1, j - 1));
        M(i - 1, i - 1) = double(i) / n * std::abs(std::sin(double(k))) + off;
      }
      Vec& v = b[k - 1];
      v.resize(n);
      for (int i = 1; i <= n; ++i) v[i - 1] = std::exp(double(i) / k) * std::sin(double(i) * k);
    }
  }
};

double maxquad(const Vec& x) {
  static const MaxquadData data;
  double f = -1e300;
  for (int k = 0; k < 5; ++k)
    f = std::max(f, x.dot(data.A[k] * x) - data.b[k].dot(x));
  return f;
}

// Wong 1 minimax (HS100 with penalized constraints), n=7.
double wong1(const Vec& x) {
  const double f1 = (x[0] - 10) * (x[0] - 10) + 5 * (x[1] - 12) * (x[1] - 12) +
                    std::pow(x[2], 4) + 3 * (x[3] - 11) * (x[3] - 11) +
                    10 * std::pow(x[4], 6) + 7 * x[5] * x[5] + std::pow(x[6], 4) -
                    4 * x[5] * x[6] - 10 * x[5] - 8 * x[6];
  const double g1 = 2 * x[0] * x[0] + 3 * std::pow(x[1], 4) + x[2] + 4 * x[3] * x[3] +
                    5 * x[4] - 127;
  const double g2 = 7 * x[0] + 3 * x[1] + 10 * x[2] * x[2] + x[3] - x[4] - 282;
  const double g3 = 23 * x[0] + x[1] * x[1] + 6 * x[5] * x[5] - 8 * x[6] - 196;
  const double g4 = 4 * x[0] * x[0] + x[1] * x[1] - 3 * x[0] * x[1] + 2 * x[2] * x[2] +
                    5 * x[5] - 11 * x[6];
  return std::max({f1, f1 + 10 * g1, f1 + 10 * g2, f1 + 10 * g3, f1 + 10 * g4});
}

struct Entry {
  std::string name;
  std::string dims;
  bool scalable;
  int fixed_dim;  // when not scalable
  std::optional<double> fstar;  // for scalable problems may depend on n
  std::function<ObjectiveProblem(int)> make;
};

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"maxq", "n >= 2", true, 0, 0.0,
       [](int n) {
         return ObjectiveProblem{"maxq", n, alternating_ramp_start(n), 0.0, maxq};
       }},
      {"maxl", "n >= 2", true, 0, 0.0,
       [](int n) {
         return ObjectiveProblem{"maxl", n, alternating_ramp_start(n), 0.0, maxl};
       }},
      {"l1hilb", "n >= 2", true, 0, 0.0,
       [](int n) {
         return ObjectiveProblem{"l1hilb", n, Vec::Ones(n), 0.0, l1hilb};
       }},
      {"crescent", "2", false, 2, 0.0,
       [](int) {
         return ObjectiveProblem{"crescent", 2, vec2(-1.5, 2.0), 0.0, crescent};
       }},
      {"demymalo", "2", false, 2, -3.0,
       [](int) {
         return ObjectiveProblem{"demymalo", 2, vec2(1.0, 1.0), -3.0, demymalo};
       }},
      {"cb2", "2", false, 2, 1.9522245,
       [](int) {
         return ObjectiveProblem{"cb2", 2, vec2(1.0, -0.1), 1.9522245, cb2};
       }},
      // cb3 is the chained variant for n > 2; at n=2 it is the classic cb3.
      {"cb3", "n >= 2", true, 0, std::nullopt,
       [](int n) {
         return ObjectiveProblem{"cb3", n, Vec::Constant(n, 2.0), 2.0 * (n - 1), cb3};
       }},
      {"chained_cb3", "n >= 2", true, 0, std::nullopt,
       [](int n) {
         return ObjectiveProblem{"chained_cb3", n, Vec::Constant(n, 2.0), 2.0 * (n - 1), cb3};
       }},
      {"shor", "5", false, 5, 22.600162,
       [](int) {
         Vec x0 = Vec::Zero(5);
         x0[4] = 1.0;
         return ObjectiveProblem{"shor", 5, x0, 22.600162, shor};
       }},
      {"maxquad", "10", false, 10, -0.8414083,
       [](int) {
         return ObjectiveProblem{"maxquad", 10, Vec::Zero(10), -0.8414083, maxquad};
       }},
      {"wong1", "7", false, 7, 680.6300573,
       [](int) {
         Vec x0(7);
         x0 << 1, 2, 0, 4, 0, 1, 1;
         return ObjectiveProblem{"wong1", 7, x0, 680.6300573, wong1};
       }},
  };
  return table;
}

}  // namespace

std::vector<ProblemInfo> registry_list() {
  std::vector<ProblemInfo> out;
  for (const auto& e : entries())
    out.push_back({e.name, e.dims, e.scalable, e.scalable ? e.fstar : e.fstar});
  return out;
}

ObjectiveProblem registry_get(const std::string& name, int n) {
  for (const auto& e : entries()) {
    if (e.name != name) continue;
    if (e.scalable) {
      if (n < 2)
        throw std::invalid_argument("problem '" + name + "' requires n >= 2, got " +
                                    std::to_string(n));
    } else if (n != e.fixed_dim) {
      throw std::invalid_argument("problem '" + name + "' has fixed dimension " +
                                  std::to_string(e.fixed_dim) + ", got " + std::to_string(n));
    }
    return e.make(n);
  }
  std::ostringstream msg;
  msg << "unknown problem '" << name << "'; available:";
  for (const auto& e : entries()) msg << " " << e.name;
  throw std::out_of_range(msg.str());
}

}  // namespace nsdfo
