#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "curvatura/errors.hpp"

namespace curvatura {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Cx = std::complex<double>;

// Wide accumulator used where two summation orders must agree bitwise after
// the final rounding to double (reference vs optimized contraction paths).
using Wide = __float128;

constexpr double kPi = 3.14159265358979323846264338327950288;

inline double sqr(double x) { return x * x; }

// ---------------------------------------------------------------------------
// Deterministic reductions
// ---------------------------------------------------------------------------

// Pairwise summation over a fixed index order. The reduction tree depends
// only on the length, never on thread count, so results are reproducible.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

// ---------------------------------------------------------------------------
// Combinatorics
// ---------------------------------------------------------------------------

inline double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline double double_factorial(int n) {  // n!! with (-1)!! = 0!! = 1
  double r = 1.0;
  for (int k = n; k >= 2; k -= 2) r *= k;
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return r;
}

// Sign of the permutation written as images perm[0..k-1]; assumes a valid
// permutation of distinct values.
inline int permutation_sign(std::span<const int> perm) {
  int inv = 0;
  for (std::size_t a = 0; a < perm.size(); ++a)
    for (std::size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

// Generalized Kronecker symbol d^{upper}_{lower}: the sign of the permutation
// carrying lower to upper when both are tuples of distinct indices over the
// same underlying set, zero otherwise.
inline int generalized_kronecker(std::span<const int> upper, std::span<const int> lower) {
  const std::size_t k = upper.size();
  if (lower.size() != k) throw PreconditionError("generalized_kronecker: tuple length mismatch");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (upper[a] == upper[b] || lower[a] == lower[b]) return 0;
  // Locate each lower entry inside upper; the resulting position map is the
  // permutation whose sign we need.
  int positions[16];
  for (std::size_t a = 0; a < k; ++a) {
    int pos = -1;
    for (std::size_t b = 0; b < k; ++b)
      if (lower[a] == upper[b]) {
        pos = static_cast<int>(b);
        break;
      }
    if (pos < 0) return 0;
    positions[a] = pos;
  }
  return permutation_sign(std::span<const int>(positions, k));
}

// Enumerates ordered tuples of k distinct indices from {0,...,n-1} grouped by
// underlying set: sets ascend lexicographically, orderings of each set ascend
// lexicographically. visit(tuple) is called once per tuple.
template <typename F>
void for_each_ordered_tuple_grouped(int n, int k, F&& visit) {
  if (k == 0) {
    std::vector<int> empty;
    visit(std::span<const int>(empty));
    return;
  }
  std::vector<int> set(k), tuple(k);
  // Enumerate ascending k-subsets.
  for (int i = 0; i < k; ++i) set[i] = i;
  while (true) {
    // All orderings of this subset in lexicographic order.
    tuple = set;
    do {
      visit(std::span<const int>(tuple));
    } while (std::next_permutation(tuple.begin(), tuple.end()));
    // Advance the subset.
    int i = k - 1;
    while (i >= 0 && set[i] == n - k + i) --i;
    if (i < 0) break;
    ++set[i];
    for (int j = i + 1; j < k; ++j) set[j] = set[j - 1] + 1;
  }
}

// Enumerates ordered pairs (K, L) of k-tuples of distinct indices from
// {0,...,n-1} sharing the same underlying set, with the generalized Kronecker
// sign d^K_L. This is the support of every double contraction with one
// Kronecker symbol. visit(K, L, sign).
template <typename F>
void for_each_same_set_tuple_pair(int n, int k, F&& visit) {
  if (k == 0) {
    std::vector<int> empty;
    visit(std::span<const int>(empty), std::span<const int>(empty), 1);
    return;
  }
  std::vector<int> set(k);
  for (int i = 0; i < k; ++i) set[i] = i;
  std::vector<std::vector<int>> orders;
  std::vector<int> parity;
  while (true) {
    orders.clear();
    parity.clear();
    std::vector<int> tuple = set;
    do {
      orders.push_back(tuple);
      parity.push_back(permutation_sign(tuple));
    } while (std::next_permutation(tuple.begin(), tuple.end()));
    for (std::size_t a = 0; a < orders.size(); ++a)
      for (std::size_t b = 0; b < orders.size(); ++b)
        visit(std::span<const int>(orders[a]), std::span<const int>(orders[b]),
              parity[a] * parity[b]);
    int i = k - 1;
    while (i >= 0 && set[i] == n - k + i) --i;
    if (i < 0) break;
    ++set[i];
    for (int j = i + 1; j < k; ++j) set[j] = set[j - 1] + 1;
  }
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Gauss-Legendre nodes and weights on (a, b) by Newton iteration on P_n.
inline void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  const int mhalf = (n + 1) / 2;
  for (int i = 0; i < mhalf; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    nodes[i] = mid - half * x;
    nodes[n - 1 - i] = mid + half * x;
    weights[i] = weights[n - 1 - i] = 2.0 * half / ((1.0 - x * x) * pp * pp);
  }
}

// ---------------------------------------------------------------------------
// Seeded randomness (engine-independent, stable across platforms)
// ---------------------------------------------------------------------------

// splitmix64; used for every seeded draw so reports are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9E3779B97F4A7C15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // in [0, 1)
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {  // Box-Muller
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // Haar-ish random orthogonal matrix via QR of a Gaussian matrix.
  Mat random_orthogonal(int n) {
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
      if (r(i, i) < 0) q.col(i) *= -1.0;
    return q;
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Jets of holomorphic maps
// ---------------------------------------------------------------------------

// Real 2-jet of a holomorphic map C^k -> C^l from its complex derivatives.
// Real coordinates are interleaved (Re z_1, Im z_1, Re z_2, ...), so
// d/dy_j f = i d/dw_j f and the Hessian blocks follow from F''.
struct HolomorphicJet {
  std::vector<Cx> value;                          // l entries
  std::vector<std::vector<Cx>> d1;                // [j][coord] complex first derivatives
  std::vector<std::vector<std::vector<Cx>>> d2;   // [j][k][coord] complex second derivatives
};

inline void holomorphic_to_real_jet(const HolomorphicJet& hj, int k, int l, Vec& value,
                                    std::vector<Vec>& d1, std::vector<std::vector<Vec>>& d2) {
  const Cx iu(0.0, 1.0);
  auto to_real = [l](const std::vector<Cx>& w) {
    Vec r(2 * l);
    for (int c = 0; c < l; ++c) {
      r[2 * c] = w[c].real();
      r[2 * c + 1] = w[c].imag();
    }
    return r;
  };
  value = to_real(hj.value);
  d1.assign(2 * k, Vec());
  for (int j = 0; j < k; ++j) {
    d1[2 * j] = to_real(hj.d1[j]);
    std::vector<Cx> dy(l);
    for (int c = 0; c < l; ++c) dy[c] = iu * hj.d1[j][c];
    d1[2 * j + 1] = to_real(dy);
  }
  d2.assign(2 * k, std::vector<Vec>(2 * k));
  for (int j = 0; j < k; ++j)
    for (int p = 0; p < k; ++p) {
      std::vector<Cx> xx(l), xy(l), yy(l);
      for (int c = 0; c < l; ++c) {
        xx[c] = hj.d2[j][p][c];
        xy[c] = iu * hj.d2[j][p][c];
        yy[c] = -hj.d2[j][p][c];
      }
      d2[2 * j][2 * p] = to_real(xx);
      d2[2 * j][2 * p + 1] = to_real(xy);
      d2[2 * j + 1][2 * p] = to_real(xy);
      d2[2 * j + 1][2 * p + 1] = to_real(yy);
    }
}

}  // namespace curvatura
