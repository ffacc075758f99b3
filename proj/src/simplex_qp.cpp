#include "nsdfo/simplex_qp.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nsdfo {

SpdMetric::SpdMetric(Mat B) : B_(std::move(B)) {
  if (B_.rows() != B_.cols()) throw std::invalid_argument("SpdMetric: matrix not square");
  const double scale = std::max(1.0, B_.cwiseAbs().maxCoeff());
  if (((B_ - B_.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
    throw std::invalid_argument("SpdMetric: matrix not symmetric");
  llt_.compute(B_);
  if (llt_.info() != Eigen::Success)
    throw std::invalid_argument("SpdMetric: matrix not positive definite");
}

Vec project_onto_simplex(const Vec& w) {
  const int p = int(w.size());
  std::vector<double> u(w.data(), w.data() + p);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (int i = 0; i < p; ++i) {
    css += u[i];
    const double t = (css - 1.0) / double(i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  Vec out(p);
  for (int i = 0; i < p; ++i) out[i] = std::max(0.0, w[i] - theta);
  return out;
}

MinNormResult min_norm_point(const Mat& V, const SpdMetric& metric, double tol) {
  const int p = int(V.cols());
  if (p < 1) throw std::invalid_argument("min_norm_point: empty generator set");
  if (V.rows() != metric.dim())
    throw std::invalid_argument("min_norm_point: generator/metric dimension mismatch");
  if (!(tol > 0)) throw std::invalid_argument("min_norm_point: tol must be positive");

  // Whitened coordinates w_j = L^{-1} v_j turn the metric problem into the
  // plain Euclidean minimum-norm point over conv(w_1..w_p), solved by Wolfe's
  // algorithm: grow/shrink a corral S, minimizing over its affine hull until
  // the affine minimizer is feasible, then test the global vertex condition.
  const Mat W = metric.whiten(V);

  // Affine minimizer over the columns in S: min ||W_S a||^2 s.t. sum a = 1,
  // via the bordered KKT system (handles affinely dependent corrals).
  auto affine_min = [&](const std::vector<int>& S) {
    const int m = int(S.size());
    Mat M = Mat::Zero(m + 1, m + 1);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) M(a, b) = 2.0 * W.col(S[a]).dot(W.col(S[b]));
    M.block(m, 0, 1, m).setOnes();
    M.block(0, m, m, 1).setOnes();
    Vec rhs = Vec::Zero(m + 1);
    rhs[m] = 1.0;
    const Vec sol = M.completeOrthogonalDecomposition().solve(rhs);
    return Vec(sol.head(m));
  };

  std::vector<int> S;
  {
    int j0 = 0;
    for (int j = 1; j < p; ++j)
      if (W.col(j).squaredNorm() < W.col(j0).squaredNorm()) j0 = j;
    S.push_back(j0);
  }
  Vec lam_S = Vec::Ones(1);
  Vec x = W.col(S[0]);
  double kkt = 0.0;

  const int max_major = 2 * p + 16;
  for (int major = 0; major < max_major; ++major) {
    // Vertex optimality check: min_j w_j.x >= x.x (up to tol).
    const double xx = x.squaredNorm();
    int jmin = 0;
    double wmin = W.col(0).dot(x);
    for (int j = 1; j < p; ++j) {
      const double wx = W.col(j).dot(x);
      if (wx < wmin) {
        wmin = wx;
        jmin = j;
      }
    }
    kkt = std::max(0.0, xx - wmin);
    if (kkt <= tol) break;
    if (std::find(S.begin(), S.end(), jmin) != S.end()) break;  // numerical stall

    S.push_back(jmin);
    Vec grown = Vec::Zero(S.size());
    grown.head(lam_S.size()) = lam_S;
    lam_S = grown;

    // Minor cycle: pull lam_S toward the affine minimizer, dropping vertices
    // that hit zero, until the affine minimizer is a convex combination.
    for (int minor = 0; minor < p + 2; ++minor) {
      Vec a = affine_min(S);
      if (a.minCoeff() > -1e-12) {
        lam_S = a.cwiseMax(0.0);
        lam_S /= lam_S.sum();
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < int(S.size()); ++i)
        if (a[i] < 1e-12 && lam_S[i] > a[i])
          theta = std::min(theta, lam_S[i] / (lam_S[i] - a[i]));
      lam_S = (1.0 - theta) * lam_S + theta * a;
      std::vector<int> keep_idx;
      for (int i = 0; i < int(S.size()); ++i)
        if (lam_S[i] > 1e-12) keep_idx.push_back(i);
      if (keep_idx.size() == S.size()) {
        // theta rounded nothing to zero; clamp the most negative instead
        int drop = 0;
        for (int i = 1; i < int(S.size()); ++i)
          if (a[i] < a[drop]) drop = i;
        keep_idx.clear();
        for (int i = 0; i < int(S.size()); ++i)
          if (i != drop) keep_idx.push_back(i);
      }
      std::vector<int> S2;
      Vec lam2(keep_idx.size());
      for (size_t i = 0; i < keep_idx.size(); ++i) {
        S2.push_back(S[keep_idx[i]]);
        lam2[i] = lam_S[keep_idx[i]];
      }
      S = std::move(S2);
      lam_S = lam2 / lam2.sum();
    }
    x = Vec::Zero(W.rows());
    for (int i = 0; i < int(S.size()); ++i) x += lam_S[i] * W.col(S[i]);
  }

  Vec lambda = Vec::Zero(p);
  for (int i = 0; i < int(S.size()); ++i) lambda[S[i]] += lam_S[i];

  MinNormResult out;
  out.weights = lambda;
  out.point = V * lambda;
  const Vec xw = W * lambda;
  out.objective = xw.squaredNorm();
  double wmin = W.col(0).dot(xw);
  for (int j = 1; j < p; ++j) wmin = std::min(wmin, W.col(j).dot(xw));
  out.kkt_residual = std::max(0.0, out.objective - wmin);
  (void)kkt;
  return out;
}

}  // namespace nsdfo
