#pragma once

// Independent numerical oracles used only by the test suites. These
// deliberately avoid the library's closed-form code paths.

#include <vector>

#include "curvatura/ambient.hpp"
#include "curvatura/numeric.hpp"

namespace curvatura::testing {

// Coordinate curvature tensor assembled from differentiated Christoffel
// symbols:
//   R(X,Y,Z,T) = g_st (d_nu G^s_mr - d_mu G^s_nr + G^l_mr G^s_nl - G^l_nr G^s_ml)
//                X^mu Y^nu Z^rho T^tau,
// matching the convention where R(X,Y,X,Y) is the sectional curvature.
inline double curvature_from_christoffels(const AmbientSpace& space, const Vec& x, const Vec& X,
                                          const Vec& Y, const Vec& Z, const Vec& T,
                                          double h = 1e-4) {
  const int d = space.dim();
  const auto gamma = space.christoffels_at(x);
  std::vector<std::vector<Mat>> dgamma(d);  // dgamma[nu][sigma](mu, rho)
  for (int nu = 0; nu < d; ++nu) {
    Vec xp = x, xm = x;
    xp[nu] += h;
    xm[nu] -= h;
    const auto gp = space.christoffels_at(xp);
    const auto gm = space.christoffels_at(xm);
    dgamma[nu].resize(d);
    for (int s = 0; s < d; ++s) dgamma[nu][s] = (gp[s] - gm[s]) / (2.0 * h);
  }
  const Mat g = space.metric_at(x);
  double total = 0.0;
  for (int mu = 0; mu < d; ++mu) {
    if (X[mu] == 0.0) continue;
    for (int nu = 0; nu < d; ++nu) {
      if (Y[nu] == 0.0) continue;
      for (int rho = 0; rho < d; ++rho) {
        if (Z[rho] == 0.0) continue;
        for (int s = 0; s < d; ++s) {
          double r = dgamma[nu][s](mu, rho) - dgamma[mu][s](nu, rho);
          for (int l = 0; l < d; ++l)
            r += gamma[l](mu, rho) * gamma[s](nu, l) - gamma[l](nu, rho) * gamma[s](mu, l);
          double gt = 0.0;
          for (int tau = 0; tau < d; ++tau) gt += g(s, tau) * T[tau];
          total += X[mu] * Y[nu] * Z[rho] * r * gt;
        }
      }
    }
  }
  return total;
}

// Metric-orthonormalization of a set of vectors at x (Gram-Schmidt).
inline std::vector<Vec> orthonormalize(const AmbientSpace& space, const Vec& x,
                                       const std::vector<Vec>& vs) {
  const Mat g = space.metric_at(x);
  std::vector<Vec> out;
  for (Vec v : vs) {
    for (const Vec& e : out) v -= e.dot(g * v) * e;
    const double len = std::sqrt(v.dot(g * v));
    if (len < 1e-12) continue;
    out.push_back(v / len);
  }
  return out;
}

// k-th elementary symmetric function of the eigenvalues of a symmetric
// matrix, via sums of principal k x k minors (independent of Newton
// identities and of any eigensolver).
inline double elementary_symmetric_minors(const Mat& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  double total = 0.0;
  while (true) {
    Mat sub(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = a(idx[r], idx[c]);
    total += sub.determinant();
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return total;
}

}  // namespace curvatura::testing
