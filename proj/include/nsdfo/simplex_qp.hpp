#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <stdexcept>

#include "nsdfo/problems.hpp"  // Vec, Mat

namespace nsdfo {

/// Symmetric positive definite metric B with cached Cholesky factorization.
/// Applications of B^{-1} always go through the factorization.
class SpdMetric {
 public:
  explicit SpdMetric(Mat B);

  static SpdMetric identity(int n) { return SpdMetric(Mat::Identity(n, n)); }

  int dim() const { return int(B_.rows()); }
  const Mat& matrix() const { return B_; }

  /// B^{-1} v
  Vec solve(const Vec& v) const { return llt_.solve(v); }
  Mat solve(const Mat& M) const { return llt_.solve(M); }

  /// L^{-1} M for B = L L^T, so that v^T B^{-1} u = (L^{-1} v)^T (L^{-1} u).
  Mat whiten(const Mat& M) const { return llt_.matrixL().solve(M); }

 private:
  Mat B_;
  Eigen::LLT<Mat> llt_;
};

struct MinNormResult {
  Vec weights;        // lambda, on the unit simplex
  Vec point;          // xi* = V lambda
  double objective;   // xi*^T B^{-1} xi*
  double kkt_residual;
};

/// Euclidean projection of w onto {lambda >= 0, sum lambda = 1}.
Vec project_onto_simplex(const Vec& w);

/// Minimizes xi^T B^{-1} xi over conv(v_1, ..., v_p), the columns of V.
/// The result satisfies the vertex variational inequality
///   xi*^T B^{-1} (v_j - xi*) >= -tol  for all j.
MinNormResult min_norm_point(const Mat& V, const SpdMetric& metric, double tol = 1e-8);

}  // namespace nsdfo
