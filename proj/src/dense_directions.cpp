#include "nsdfo/dense_directions.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nsdfo {

namespace {

int nth_prime(int k) {
  static std::vector<int> primes = {2, 3};
  while (int(primes.size()) <= k) {
    int c = primes.back() + 2;
    for (;; c += 2) {
      bool is_prime = true;
      for (int p : primes) {
        if (p * p > c) break;
        if (c % p == 0) {
          is_prime = false;
          break;
        }
      }
      if (is_prime) break;
    }
    primes.push_back(c);
  }
  return primes[k];
}

// Acklam's rational approximation of the inverse standard normal CDF.
double inv_norm_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

double halton(long index, int base) {
  double f = 1.0, r = 0.0;
  for (long i = index; i > 0; i /= base) {
    f /= base;
    r += f * double(i % base);
  }
  return r;
}

Vec dense_direction(long index, int n) {
  if (index < 0) throw std::invalid_argument("dense_direction: index must be >= 0");
  if (n < 1) throw std::invalid_argument("dense_direction: n must be >= 1");
  // Offset keeps the all-zero Halton point at index 0 out of the sequence.
  const long idx = index + 1;
  Vec z(n);
  for (int j = 0; j < n; ++j) {
    double u = halton(idx, nth_prime(j));
    u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
    z[j] = inv_norm_cdf(u);
  }
  const double nz = z.norm();
  if (nz < 1e-12) {
    Vec e1 = Vec::Zero(n);
    e1[0] = 1.0;
    return e1;
  }
  return z / nz;
}

}  // namespace nsdfo
