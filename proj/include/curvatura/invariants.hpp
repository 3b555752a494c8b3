#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "curvatura/errors.hpp"
#include "curvatura/frames.hpp"
#include "curvatura/numeric.hpp"

namespace curvatura {

// ---------------------------------------------------------------------------
// Wedge evaluation
//
// Convention, pinned by the hypersurface reduction K^f_2p = sigma_2p/C(n,2p):
//   (W_1 ^ ... ^ W_p ^ psi_1 ^ ... ^ psi_q)(A_1,...,A_k)
//     = (1/2^p) sum_{s in S_k} sgn(s) prod_t W_t(A_s(2t-1), A_s(2t))
//                                     prod_r psi_r(A_s(2p+r)),  k = 2p + q.
// ---------------------------------------------------------------------------

namespace wedge_detail {

// Permutation sum with a generic two-form accessor omega2(t, a, b) and
// one-form accessor psi(r, a); a, b index the argument list.
template <typename TwoFormAt, typename OneFormAt>
Wide permutation_sum(int p, int q, const TwoFormAt& omega2, const OneFormAt& psi) {
  const int k = 2 * p + q;
  if (k > 8) throw PreconditionError("wedge evaluation supports at most 8 arguments");
  int sigma[8];
  for (int i = 0; i < k; ++i) sigma[i] = i;
  Wide acc = 0;
  do {
    double term = permutation_sign(std::span<const int>(sigma, k));
    for (int t = 0; t < p; ++t) term *= omega2(t, sigma[2 * t], sigma[2 * t + 1]);
    for (int r = 0; r < q; ++r) term *= psi(r, sigma[2 * p + r]);
    acc += term;
  } while (std::next_permutation(sigma, sigma + k));
  return acc;
}

inline double finish(Wide acc, int p, double scale) {
  for (int t = 0; t < p; ++t) acc /= 2;
  return static_cast<double>(acc) * scale;
}

inline void check_tuple(std::span<const int> tuple, int n) {
  for (std::size_t a = 0; a < tuple.size(); ++a) {
    if (tuple[a] < 0 || tuple[a] >= n)
      throw PreconditionError("wedge_eval: tuple index out of range");
    for (std::size_t b = a + 1; b < tuple.size(); ++b)
      if (tuple[a] == tuple[b]) throw PreconditionError("wedge_eval: repeated tuple index");
  }
}

}  // namespace wedge_detail

// Wedge of two-forms (given as value matrices on frame pairs) and optional
// one-forms, evaluated on the frame tuple e_{i_1},...,e_{i_k}.
inline double wedge_eval(std::span<const Mat> two_forms, std::span<const Vec> one_forms,
                         std::span<const int> tuple) {
  const int p = static_cast<int>(two_forms.size());
  const int q = static_cast<int>(one_forms.size());
  if (static_cast<int>(tuple.size()) != 2 * p + q)
    throw PreconditionError("wedge_eval: tuple length must be 2p+q");
  if (tuple.empty()) return 1.0;
  wedge_detail::check_tuple(tuple, p ? static_cast<int>(two_forms[0].rows())
                                     : static_cast<int>(one_forms[0].size()));
  const Wide acc = wedge_detail::permutation_sum(
      p, q, [&](int t, int a, int b) { return two_forms[t](tuple[a], tuple[b]); },
      [&](int r, int a) { return one_forms[r][tuple[a]]; });
  return wedge_detail::finish(acc, p, 1.0);
}

// Same wedge on arbitrary argument vectors given in frame coefficients
// (needed for identities stated on general tangent vectors).
inline double wedge_eval_vectors(std::span<const Mat> two_forms, std::span<const Vec> one_forms,
                                 std::span<const Vec> args) {
  const int p = static_cast<int>(two_forms.size());
  const int q = static_cast<int>(one_forms.size());
  if (static_cast<int>(args.size()) != 2 * p + q)
    throw PreconditionError("wedge_eval_vectors: argument count must be 2p+q");
  if (args.empty()) return 1.0;
  const Wide acc = wedge_detail::permutation_sum(
      p, q, [&](int t, int a, int b) { return args[a].dot(two_forms[t] * args[b]); },
      [&](int r, int a) { return one_forms[r].dot(args[a]); });
  return wedge_detail::finish(acc, p, 1.0);
}

// ---------------------------------------------------------------------------
// 2p-th relative mean curvature
//   K^f_2p = ((n-2p)!/n!) sum_{I_2p} Omega_{i1 i2} ^ ... (e_{i1},...,e_{i_2p})
// ---------------------------------------------------------------------------

// Reference implementation: brute-force sum over ordered tuples (grouped by
// underlying set), every wedge expanded as a full permutation sum.
inline double k2p_at(const RelCurvTensor& omega, int p) {
  const int n = omega.n();
  if (p < 0 || 2 * p > n) throw PreconditionError("k2p_at: need 0 <= 2p <= n");
  if (p == 0) return 1.0;
  const int k = 2 * p;
  Wide acc = 0;
  for_each_ordered_tuple_grouped(n, k, [&](std::span<const int> tuple) {
    acc += wedge_detail::permutation_sum(
        p, 0,
        [&](int t, int a, int b) {
          return omega(tuple[2 * t], tuple[2 * t + 1], tuple[a], tuple[b]);
        },
        [](int, int) { return 1.0; });
  });
  return wedge_detail::finish(acc, p, factorial(n - 2 * p) / factorial(n));
}

namespace wedge_detail {

// Enumerates the pairings of {0,...,k-1} into p ordered slots of ascending
// pairs (a_t < b_t); visit(positions) receives the concatenated position
// list (a_0, b_0, a_1, b_1, ...).
template <typename F>
void for_each_slot_pairing(int p, int* positions, unsigned used, int k, int slot, F&& visit) {
  if (slot == p) {
    visit();
    return;
  }
  for (int a = 0; a < k; ++a) {
    if (used & (1u << a)) continue;
    for (int b = a + 1; b < k; ++b) {
      if (used & (1u << b)) continue;
      positions[2 * slot] = a;
      positions[2 * slot + 1] = b;
      for_each_slot_pairing(p, positions, used | (1u << a) | (1u << b), k, slot + 1, visit);
    }
  }
}

}  // namespace wedge_detail

// Optimized route: iterates unordered index sets and slot pairings, folding
// the two orientations of every pair (exactly equal terms, by the exact
// antisymmetry of the stored tensor) and skipping products that die on an
// exact zero. Matches k2p_at bitwise on small n; see the invariants tests.
inline double k2p_at_fast(const RelCurvTensor& omega, int p) {
  const int n = omega.n();
  if (p < 0 || 2 * p > n) throw PreconditionError("k2p_at_fast: need 0 <= 2p <= n");
  if (p == 0) return 1.0;
  const int k = 2 * p;
  Wide acc = 0;
  int positions[8];
  for_each_ordered_tuple_grouped(n, k, [&](std::span<const int> tuple) {
    Wide local = 0;
    wedge_detail::for_each_slot_pairing(p, positions, 0u, k, 0, [&] {
      double prod = 1.0;
      for (int t = 0; t < p; ++t) {
        prod *= omega(tuple[2 * t], tuple[2 * t + 1], tuple[positions[2 * t]],
                      tuple[positions[2 * t + 1]]);
        if (prod == 0.0) return;
      }
      local += double(permutation_sign(std::span<const int>(positions, k))) * prod;
    });
    // each ascending pairing stands for the 2^p orientation variants
    for (int t = 0; t < p; ++t) local *= 2;
    acc += local;
  });
  return wedge_detail::finish(acc, p, factorial(n - 2 * p) / factorial(n));
}

// ---------------------------------------------------------------------------
// (2p+1)-th mean curvature vector, coefficients in the normal frame:
//   H^f_2p+1 = ((n-2p-1)!/n!) sum_a sum_{I_2p+1}
//              Omega_{i1 i2} ^ ... ^ theta_{i_{2p+1} a}(e_{i1},...) e_a
// Out-of-range p returns the zero vector (H^f_{-1} = H^f_{n+1} = 0).
// ---------------------------------------------------------------------------

inline Vec h2p1_at(const RelCurvTensor& omega, const SffTensor& sff, int p) {
  const int n = sff.n, m = sff.m;
  Vec out = Vec::Zero(m);
  if (p < 0 || 2 * p + 1 > n) return out;
  const int k = 2 * p + 1;
  std::vector<Wide> acc(m, Wide(0));
  for_each_ordered_tuple_grouped(n, k, [&](std::span<const int> tuple) {
    const int theta_row = tuple[2 * p];
    for (int a = 0; a < m; ++a) {
      acc[a] += wedge_detail::permutation_sum(
          p, 1,
          [&](int t, int x, int y) {
            return omega(tuple[2 * t], tuple[2 * t + 1], tuple[x], tuple[y]);
          },
          [&](int, int x) { return sff.h[a](theta_row, tuple[x]); });
    }
  });
  const double scale = factorial(n - 2 * p - 1) / factorial(n);
  for (int a = 0; a < m; ++a) out[a] = wedge_detail::finish(acc[a], p, scale);
  return out;
}

// ---------------------------------------------------------------------------
// Intrinsic (Gauss-Bonnet) invariants: same contractions with
// Omega^M_ijkl = Omega_ijkl + R_ijkl (ambient curvature in the frame).
// ---------------------------------------------------------------------------

inline RelCurvTensor intrinsic_curvature_tensor(const RelCurvTensor& omega,
                                                const AmbientFrameCurvature& rc) {
  RelCurvTensor omega_m(omega.n());
  for (int i = 0; i < omega.n(); ++i)
    for (int j = i + 1; j < omega.n(); ++j)
      for (int k = 0; k < omega.n(); ++k)
        for (int l = k + 1; l < omega.n(); ++l)
          omega_m.set_canonical(i, j, k, l, omega(i, j, k, l) + rc.r_tttt(i, j, k, l));
  return omega_m;
}

struct IntrinsicInvariants {
  double k2p = 0.0;
  Vec h2p1;
};

inline IntrinsicInvariants intrinsic_invariants(const RelCurvTensor& omega,
                                                const AmbientFrameCurvature& rc,
                                                const SffTensor& sff, int p) {
  const RelCurvTensor omega_m = intrinsic_curvature_tensor(omega, rc);
  return {k2p_at(omega_m, p), h2p1_at(omega_m, sff, p)};
}

// ---------------------------------------------------------------------------
// Elementary symmetric functions of a symmetric matrix via Newton's
// identities on power sums (no eigensolve).
// ---------------------------------------------------------------------------

inline double elementary_symmetric(const Mat& a, int k) {
  const int n = static_cast<int>(a.rows());
  if (k < 0 || k > n) throw PreconditionError("elementary_symmetric: need 0 <= k <= n");
  if (k == 0) return 1.0;
  std::vector<double> power(k + 1, 0.0);  // p_i = tr(a^i)
  Mat ai = Mat::Identity(n, n);
  for (int i = 1; i <= k; ++i) {
    ai = ai * a;
    power[i] = ai.trace();
  }
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int i = 1; i <= k; ++i) {
    double s = 0.0;
    for (int j = 1; j <= i; ++j) s += (j % 2 ? 1.0 : -1.0) * e[i - j] * power[j];
    e[i] = s / i;
  }
  return e[k];
}

// ---------------------------------------------------------------------------
// Exact moments on the unit normal sphere S^{m-1} (Wick pairing).
// ---------------------------------------------------------------------------

// Volume of the unit k-sphere, C_k = 2 pi^{(k+1)/2} / Gamma((k+1)/2).
inline double unit_sphere_volume(int k) {
  static const auto table = [] {
    std::array<double, 24> t{};
    for (int j = 0; j < 24; ++j) t[j] = 2.0 * std::pow(kPi, 0.5 * (j + 1)) / std::tgamma(0.5 * (j + 1));
    return t;
  }();
  if (k >= 0 && k < static_cast<int>(table.size())) return table[k];
  return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

// integral over S^{m-1} of prod_a xi_a^{counts[a]}; zero unless all counts
// are even, else C_{m-1} prod (counts_a - 1)!! / (m (m+2) ... (m+2K-2)).
inline double sphere_monomial_integral(int m, std::span<const int> counts) {
  int total = 0;
  double num = 1.0;
  for (int c : counts) {
    if (c % 2) return 0.0;
    total += c;
    num *= double_factorial(c - 1);
  }
  double den = 1.0;
  for (int j = 0; 2 * j < total; ++j) den *= (m + 2 * j);
  return unit_sphere_volume(m - 1) * num / den;
}

namespace moment_detail {

// sum over alpha-tuples of moment(extra + counts(alpha)) * prod_t h^{alpha_t}(I_t, J_t),
// enumerated recursively with running products.
inline double contraction_integral(const SffTensor& sff, std::span<const int> I,
                                   std::span<const int> J, int extra_axis) {
  const int m = sff.m;
  const int k = static_cast<int>(I.size());
  std::vector<int> counts(m, 0);
  if (extra_axis >= 0) counts[extra_axis] = 1;
  double total = 0.0;
  std::vector<int> alpha(k, 0);
  // iterate alpha in odometer order
  while (true) {
    for (int a : alpha) ++counts[a];
    bool even = true;
    for (int c : counts)
      if (c % 2) {
        even = false;
        break;
      }
    if (even) {
      double prod = sphere_monomial_integral(m, counts);
      for (int t = 0; t < k && prod != 0.0; ++t) prod *= sff.h[alpha[t]](I[t], J[t]);
      total += prod;
    }
    for (int a : alpha) --counts[a];
    int pos = k - 1;
    while (pos >= 0 && alpha[pos] == m - 1) alpha[pos--] = 0;
    if (pos < 0) break;
    ++alpha[pos];
  }
  return total;
}

// sum_{I,J same-set ordered tuples of size k} d^I_J  f(I, J)
template <typename F>
double kronecker_double_sum(int n, int k, F&& f) {
  double total = 0.0;
  std::vector<int> set(k);
  for (int i = 0; i < k; ++i) set[i] = i;
  if (k == 0) return f(std::span<const int>(), std::span<const int>());
  while (true) {
    std::vector<int> I = set;
    do {
      const int sign_i = generalized_kronecker(std::span<const int>(set), std::span<const int>(I));
      std::vector<int> J = set;
      do {
        const int sign_j =
            generalized_kronecker(std::span<const int>(set), std::span<const int>(J));
        total += double(sign_i * sign_j) * f(std::span<const int>(I), std::span<const int>(J));
      } while (std::next_permutation(J.begin(), J.end()));
    } while (std::next_permutation(I.begin(), I.end()));
    int i = k - 1;
    while (i >= 0 && set[i] == n - k + i) --i;
    if (i < 0) break;
    ++set[i];
    for (int j = i + 1; j < k; ++j) set[j] = set[j - 1] + 1;
  }
  return total;
}

}  // namespace moment_detail

// integral over S^{m-1} of sigma_k(S_xi), evaluated exactly by Wick pairing
// (odd k comes out exactly zero by parity of the moments).
inline double sigma_k_normal_integral(const SffTensor& sff, int k) {
  if (k == 0) return unit_sphere_volume(sff.m - 1);
  if (k > sff.n) return 0.0;
  return moment_detail::kronecker_double_sum(
             sff.n, k,
             [&](std::span<const int> I, std::span<const int> J) {
               return moment_detail::contraction_integral(sff, I, J, -1);
             }) /
         factorial(k);
}

// Independent route for K^f_2p through the normal-sphere integral of the
// 2p-th elementary symmetric polynomial of the shape operators:
//   K^f_2p = (2^{2p} pi^p p! / C_{m+2p-1}) ((n-2p)!/n!) int_{S^{m-1}} M_2p(xi) dxi,
// the integral evaluated exactly by Wick pairing of the monomials.
inline double k2p_via_normal_integral(const SffTensor& sff, int p) {
  const int n = sff.n, m = sff.m;
  if (p < 0 || 2 * p > n) throw PreconditionError("k2p_via_normal_integral: need 0 <= 2p <= n");
  if (p == 0) return 1.0;
  const int k = 2 * p;
  // int sigma_2p(S_xi) dxi = (1/(2p)!) sum_{I,J} d^I_J sum_alpha moment * prod h
  const double integral =
      moment_detail::kronecker_double_sum(n, k, [&](std::span<const int> I, std::span<const int> J) {
        return moment_detail::contraction_integral(sff, I, J, -1);
      }) /
      factorial(k);
  const double constant = std::pow(2.0, 2 * p) * std::pow(kPi, p) * factorial(p) /
                          unit_sphere_volume(m + 2 * p - 1) * factorial(n - 2 * p) / factorial(n);
  return constant * integral;
}

// The analogous route for H^f_2p+1 (normal-frame coefficients):
//   H^f_2p+1 = (2^{2p} pi^p p! (m+2p) / C_{m+2p-1}) ((n-2p-1)!/n!)
//              int_{S^{m-1}} xi M_{2p+1}(xi) dxi.
inline Vec h2p1_via_normal_integral(const SffTensor& sff, int p) {
  const int n = sff.n, m = sff.m;
  Vec out = Vec::Zero(m);
  if (p < 0 || 2 * p + 1 > n) return out;
  const int k = 2 * p + 1;
  const double constant = std::pow(2.0, 2 * p) * std::pow(kPi, p) * factorial(p) * (m + 2 * p) /
                          unit_sphere_volume(m + 2 * p - 1) * factorial(n - 2 * p - 1) /
                          factorial(n);
  for (int axis = 0; axis < m; ++axis) {
    const double integral =
        moment_detail::kronecker_double_sum(n, k,
                                            [&](std::span<const int> I, std::span<const int> J) {
                                              return moment_detail::contraction_integral(sff, I, J,
                                                                                         axis);
                                            }) /
        factorial(k);
    out[axis] = constant * integral;
  }
  return out;
}

}  // namespace curvatura
