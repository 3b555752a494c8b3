#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvatura/frames.hpp"
#include "curvatura/immersion.hpp"
#include "curvatura/invariants.hpp"
#include "curvatura/numeric.hpp"
#include "curvatura/parallel.hpp"

namespace curvatura {

// Everything the Euler-Lagrange machinery needs at one parameter point.
struct PointState {
  AdaptedFrame frame;
  SffTensor sff;
  RelCurvTensor omega{1};
  AmbientFrameCurvature rc;
};

inline PointState point_state(const ImmersionPatch& patch, const Vec& u,
                              const std::vector<int>& tangent_order = {}) {
  PointState st;
  st.frame = adapted_frame_at(patch, u, tangent_order);
  st.sff = second_fundamental_form(patch, u, st.frame);
  st.omega = relative_curvature(st.sff);
  st.rc = ambient_frame_curvature(patch.ambient(), st.frame);
  return st;
}

namespace variational_detail {

// [Omega_{I[0]I[1]} ^ ... ^ Omega_{I[2q-2]I[2q-1]} ^ theta_{row1,a1}
//  (^ theta_{row2,a2})](e_{J[0]},...,e_{J[k-1]}) for tuple spans.
inline double omega_theta_wedge(const RelCurvTensor& omega, const SffTensor& sff,
                                std::span<const int> I_forms, int row1, int a1, int row2, int a2,
                                std::span<const int> J) {
  const int q = static_cast<int>(I_forms.size()) / 2;
  const int n_one = row2 < 0 ? 1 : 2;
  const Wide acc = wedge_detail::permutation_sum(
      q, n_one,
      [&](int t, int x, int y) {
        return omega(I_forms[2 * t], I_forms[2 * t + 1], J[x], J[y]);
      },
      [&](int r, int x) {
        return r == 0 ? sff.h[a1](row1, J[x]) : sff.h[a2](row2, J[x]);
      });
  return wedge_detail::finish(acc, q, 1.0);
}

// Pure omega wedge over tuple J (no one-form slots).
inline double omega_wedge(const RelCurvTensor& omega, std::span<const int> I_forms,
                          std::span<const int> J) {
  const int q = static_cast<int>(I_forms.size()) / 2;
  if (q == 0) return 1.0;
  const Wide acc = wedge_detail::permutation_sum(
      q, 0,
      [&](int t, int x, int y) {
        return omega(I_forms[2 * t], I_forms[2 * t + 1], J[x], J[y]);
      },
      [](int, int) { return 1.0; });
  return wedge_detail::finish(acc, q, 1.0);
}

}  // namespace variational_detail

// W_{2p-1} of the first variational formula, in frame coefficients (normal
// components from the curvature-normal group, tangential components from the
// R_{i' a j j'} groups). The leading group carries the factor 2 required by
// the space-form reduction L_2p = -(n-2p) H_{2p+1} + 2 c p H_{2p-1}.
inline Vec w_vector_at(const RelCurvTensor& omega, const SffTensor& sff,
                       const AmbientFrameCurvature& rc, int p) {
  const int n = sff.n, m = sff.m;
  Vec out = Vec::Zero(n + m);
  if (p < 1) return out;  // W_{-1} = 0
  const double cw = factorial(n - 2 * p) / (factorial(2 * p - 1) * factorial(n));

  // Group 1: 2 cw sum d^{I,i}_{J,j} R_{i b j a} [Omega_{I'} ^ theta_{I_last, b}](e_J) e_a
  if (2 * p <= n) {
    for_each_same_set_tuple_pair(n, 2 * p, [&](std::span<const int> K, std::span<const int> L,
                                               int sign) {
      const auto I = K.subspan(0, 2 * p - 1);
      const auto J = L.subspan(0, 2 * p - 1);
      const int i = K[2 * p - 1], j = L[2 * p - 1];
      for (int b = 0; b < m; ++b) {
        const double wedge = variational_detail::omega_theta_wedge(
            omega, sff, I.subspan(0, 2 * p - 2), I[2 * p - 2], b, -1, -1, J);
        if (wedge == 0.0) continue;
        for (int a = 0; a < m; ++a)
          out[n + a] += 2.0 * cw * sign * rc.r_tntn(i, b, j, a) * wedge;
      }
    });
  }

  // Group 2a: cw sum d^{I,i,i'}_{J,j,j'} R_{i' a j j'} [Omega ^ theta_{., a}](e_J) e_i
  if (2 * p + 1 <= n) {
    for_each_same_set_tuple_pair(n, 2 * p + 1, [&](std::span<const int> K,
                                                   std::span<const int> L, int sign) {
      const auto I = K.subspan(0, 2 * p - 1);
      const auto J = L.subspan(0, 2 * p - 1);
      const int i = K[2 * p - 1], ip = K[2 * p];
      const int j = L[2 * p - 1], jp = L[2 * p];
      for (int a = 0; a < m; ++a) {
        const double r = rc.r_tntt(ip, a, j, jp);
        if (r == 0.0) continue;
        out[i] += cw * sign * r *
                  variational_detail::omega_theta_wedge(omega, sff, I.subspan(0, 2 * p - 2),
                                                        I[2 * p - 2], a, -1, -1, J);
      }
    });
  }

  // Group 2b: -2 cw sum d^{I,i'}_{J,j'} R_{i' a i j'} [Omega ^ theta_{., a}](e_J) e_i
  if (2 * p <= n) {
    for_each_same_set_tuple_pair(n, 2 * p, [&](std::span<const int> K, std::span<const int> L,
                                               int sign) {
      const auto I = K.subspan(0, 2 * p - 1);
      const auto J = L.subspan(0, 2 * p - 1);
      const int ip = K[2 * p - 1], jp = L[2 * p - 1];
      for (int a = 0; a < m; ++a) {
        const double wedge = variational_detail::omega_theta_wedge(
            omega, sff, I.subspan(0, 2 * p - 2), I[2 * p - 2], a, -1, -1, J);
        if (wedge == 0.0) continue;
        for (int i = 0; i < n; ++i)
          out[i] -= 2.0 * cw * sign * rc.r_tntt(ip, a, i, jp) * wedge;
      }
    });
  }
  return out;
}

// Q^i_{2p-2} coefficients q^{i,a} (n x m); zero for p <= 0.
inline Mat q_tensor_at(const RelCurvTensor& omega, const SffTensor& sff,
                       const AmbientFrameCurvature& rc, int p) {
  const int n = sff.n, m = sff.m;
  Mat q = Mat::Zero(n, m);
  if (p < 1 || 2 * p > n) return q;
  const double cq = factorial(n - 2 * p) / (factorial(2 * p - 2) * factorial(n));

  for_each_same_set_tuple_pair(n, 2 * p, [&](std::span<const int> K, std::span<const int> L,
                                             int sign) {
    const auto I = K.subspan(0, 2 * p - 2);
    const auto J = L.subspan(0, 2 * p - 2);
    const int i = K[2 * p - 2], ip = K[2 * p - 1];
    const int j = L[2 * p - 2], jp = L[2 * p - 1];
    // Term 1: d R_{i' a j j'} Omega_{I}(e_J)
    const double wedge1 = variational_detail::omega_wedge(omega, I, J);
    for (int a = 0; a < m; ++a) {
      const double r = rc.r_tntt(ip, a, j, jp);
      if (r != 0.0 && wedge1 != 0.0) q(i, a) += cq * sign * r * wedge1;
    }
    // Term 2: 2(p-1) d R_{i' b j j'} [Omega_{I''} ^ theta_{.,a} ^ theta_{.,b}](e_J)
    if (p >= 2) {
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          const double r = rc.r_tntt(ip, b, j, jp);
          if (r == 0.0) continue;
          const double wedge = variational_detail::omega_theta_wedge(
              omega, sff, I.subspan(0, 2 * p - 4), I[2 * p - 4], a, I[2 * p - 3], b, J);
          q(i, a) += 2.0 * (p - 1) * cq * sign * r * wedge;
        }
    }
  });
  return q;
}

// ---------------------------------------------------------------------------
// Qtilde and the assembled Euler-Lagrange operator
// ---------------------------------------------------------------------------

// Frame-field stencil steps. The fields are computed to near machine
// precision, so the step can sit well below the truncation sweet spot of
// noisier differences; 0.005 of the axis extent keeps the fourth-order
// truncation error at the 1e-5 scale even for rapidly turning frames.
struct StencilOptions {
  double step_fraction = 0.005;  // of the per-axis domain extent
  double boundary_shrink = 0.2;  // cap: step <= shrink * distance to the edge
};

namespace variational_detail {

// Per-axis stencil steps, shrinking near non-periodic boundaries.
inline std::vector<double> stencil_steps(const ImmersionPatch& patch, const Vec& u,
                                         const StencilOptions& opt) {
  const int n = patch.intrinsic_dim();
  std::vector<double> h(n);
  for (int k = 0; k < n; ++k) {
    const double range = patch.hi()[k] - patch.lo()[k];
    double step = opt.step_fraction * range;
    if (!patch.periodic(k)) {
      const double dist = std::min(u[k] - patch.lo()[k], patch.hi()[k] - u[k]);
      if (!(dist > 0.0))
        throw StencilError(patch.name() + ": stencil leaves the domain at a boundary node");
      step = std::min(step, opt.boundary_shrink * dist);
    }
    h[k] = step;
  }
  return h;
}

// Fourth-order central difference of a vector field given at the 4-point
// stencil (u-2h, u-h, u+h, u+2h).
inline Vec central_diff4(const Vec& m2, const Vec& m1, const Vec& p1, const Vec& p2, double h) {
  return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

}  // namespace variational_detail

// Qtilde_{2p-2} = sum_{i,A} <Q^i, nabla_{e_i} e_A> e_A
//              - sum_a div(sum_i q^{i,a} e_i) e_a,   (zero for p <= 0)
// with nabla the ambient connection and all parameter derivatives taken by
// fourth-order central differences of the deterministically gauged frame
// field. Returned in frame coefficients at u.
inline Vec qtilde_at(const ImmersionPatch& patch, const Vec& u, int p,
                     const StencilOptions& opt = {}) {
  const int n = patch.intrinsic_dim(), m = patch.codim();
  Vec out = Vec::Zero(n + m);
  if (p < 1 || 2 * p > n) return out;

  const PointState st = point_state(patch, u);
  const Mat q = q_tensor_at(st.omega, st.sff, st.rc, p);
  const Jet2 jet = patch.jet_at(u);
  const Mat g = patch.ambient().metric_at(st.frame.point);
  const auto gamma = patch.ambient().christoffels_at(st.frame.point);
  const auto h = variational_detail::stencil_steps(patch, u, opt);

  // Stencil states (frames and q tensors at u +- h_k, u +- 2 h_k).
  struct Neighbor {
    AdaptedFrame frame;
    Mat q;
  };
  std::vector<std::array<Neighbor, 4>> nb(n);  // order: -2h, -h, +h, +2h
  for (int k = 0; k < n; ++k) {
    const double offsets[4] = {-2.0 * h[k], -h[k], h[k], 2.0 * h[k]};
    for (int s = 0; s < 4; ++s) {
      Vec up = u;
      up[k] += offsets[s];
      PointState stn = point_state(patch, up);
      nb[k][s].frame = stn.frame;
      nb[k][s].q = q_tensor_at(stn.omega, stn.sff, stn.rc, p);
    }
  }

  auto gamma_term = [&](const Vec& direction, const Vec& field) {
    Vec r = Vec::Zero(field.size());
    for (int c = 0; c < static_cast<int>(field.size()); ++c)
      r[c] = direction.dot(gamma[c] * field);
    return r;
  };

  // d(e_A)/du_k at u for all A, then nabla_{e_i} e_A.
  const int dim = n + m;
  std::vector<std::vector<Vec>> de(n, std::vector<Vec>(dim));  // de[k][A]
  for (int k = 0; k < n; ++k)
    for (int A = 0; A < dim; ++A)
      de[k][A] = variational_detail::central_diff4(nb[k][0].frame.col(A), nb[k][1].frame.col(A),
                                                   nb[k][2].frame.col(A), nb[k][3].frame.col(A),
                                                   h[k]);

  // Q^i as chart vectors.
  std::vector<Vec> Qi(n, Vec::Zero(patch.ambient().dim()));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) Qi[i] += q(i, a) * st.frame.normal.col(a);

  // First block: sum_{i,A} <Q^i, nabla_{e_i} e_A> e_A (frame coefficients).
  for (int A = 0; A < dim; ++A) {
    double coeff = 0.0;
    for (int i = 0; i < n; ++i) {
      Vec nabla = Vec::Zero(patch.ambient().dim());
      for (int k = 0; k < n; ++k) {
        const double cik = st.frame.tangent_coeffs(i, k);
        if (cik == 0.0) continue;
        nabla += cik * (de[k][A] + gamma_term(jet.d1[k], st.frame.col(A)));
      }
      coeff += Qi[i].dot(g * nabla);
    }
    out[A] += coeff;
  }

  // Second block: -div(V^a) with V^a = sum_i q^{i,a} e_i.
  for (int a = 0; a < m; ++a) {
    auto field_at = [&](int k, int s) {  // V^a at stencil point (k, s)
      Vec v = Vec::Zero(patch.ambient().dim());
      for (int i = 0; i < n; ++i) v += nb[k][s].q(i, a) * nb[k][s].frame.tangent.col(i);
      return v;
    };
    Vec Va = Vec::Zero(patch.ambient().dim());
    for (int i = 0; i < n; ++i) Va += q(i, a) * st.frame.tangent.col(i);
    double div = 0.0;
    for (int i = 0; i < n; ++i) {
      Vec nabla = Vec::Zero(patch.ambient().dim());
      for (int k = 0; k < n; ++k) {
        const double cik = st.frame.tangent_coeffs(i, k);
        if (cik == 0.0) continue;
        const Vec dv = variational_detail::central_diff4(field_at(k, 0), field_at(k, 1),
                                                         field_at(k, 2), field_at(k, 3), h[k]);
        nabla += cik * (dv + gamma_term(jet.d1[k], Va));
      }
      div += nabla.dot(g * st.frame.tangent.col(i));
    }
    out[n + a] -= div;
  }
  return out;
}

// ---------------------------------------------------------------------------
// L_2p = -(n-2p) H^f_2p+1 + p W_2p-1 + p Qtilde_2p-2
// ---------------------------------------------------------------------------

struct ELSample {
  Vec h2p1;      // normal coefficients, length m
  Vec w;         // frame coefficients, length n+m
  Vec qtilde;    // frame coefficients, length n+m
  Vec l_frame;   // frame coefficients, length n+m
  Vec l_chart;   // ambient chart vector
};

inline ELSample el_sample_at(const ImmersionPatch& patch, const Vec& u, int p,
                             const StencilOptions& opt = {}) {
  const int n = patch.intrinsic_dim(), m = patch.codim();
  if (p < 0 || 2 * p > n) throw PreconditionError("el_sample_at: need 0 <= 2p <= n");
  const PointState st = point_state(patch, u);
  ELSample s;
  s.h2p1 = h2p1_at(st.omega, st.sff, p);
  s.w = p >= 1 ? w_vector_at(st.omega, st.sff, st.rc, p) : Vec::Zero(n + m);
  s.qtilde = p >= 1 ? qtilde_at(patch, u, p, opt) : Vec::Zero(n + m);
  s.l_frame = Vec::Zero(n + m);
  for (int a = 0; a < m; ++a) s.l_frame[n + a] = -(n - 2 * p) * s.h2p1[a];
  s.l_frame += p * (s.w + s.qtilde);
  s.l_chart = st.frame.to_chart(s.l_frame);
  return s;
}

inline Vec el_operator_at(const ImmersionPatch& patch, const Vec& u, int p,
                          const StencilOptions& opt = {}) {
  return el_sample_at(patch, u, p, opt).l_chart;
}

// Space-form shortcut L_2p = -(n-2p) H^f_2p+1 + 2 c p H^f_2p-1, in normal
// frame coefficients.
inline Vec el_spaceform_normal_coeffs(const RelCurvTensor& omega, const SffTensor& sff, double c,
                                      int p) {
  Vec l = -(double(sff.n - 2 * p)) * h2p1_at(omega, sff, p);
  if (p >= 1) l += 2.0 * c * p * h2p1_at(omega, sff, p - 1);
  return l;
}

inline Vec el_spaceform_at(const ImmersionPatch& patch, const Vec& u, int p) {
  const AmbientKind kind = patch.ambient().kind();
  if (kind != AmbientKind::Euclidean && kind != AmbientKind::SpaceForm)
    throw PreconditionError("el_spaceform_at: ambient must be euclidean or a space form");
  const PointState st = point_state(patch, u);
  const Vec l = el_spaceform_normal_coeffs(st.omega, st.sff, patch.ambient().curvature(), p);
  Vec coeffs = Vec::Zero(st.sff.n + st.sff.m);
  coeffs.tail(st.sff.m) = l;
  return st.frame.to_chart(coeffs);
}

// ---------------------------------------------------------------------------
// Total 2p-th mean curvature and the first-variation verifier
// ---------------------------------------------------------------------------

inline double total_mean_curvature(const SubmanifoldMesh& mesh, int p) {
  std::vector<double> field(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t k) {
    const PointState st = point_state(mesh.patch, mesh.nodes[k]);
    field[k] = k2p_at(st.omega, p);
  });
  return integrate(mesh, field);
}

struct FirstVariationReport {
  double lhs = 0.0;      // d/dt M_2p(f_t) at t=0 (Richardson central differences)
  double rhs = 0.0;      // integral of <L_2p, nu_eff>
  double abs_gap = 0.0;
  double rel_gap = 0.0;
};

struct FirstVariationOptions {
  double t_step = 1e-3;
  StencilOptions stencil;
};

// Caller contract: the patch covers a closed manifold (fully periodic, or
// pole-closed with the volume element vanishing on the seam); the boundary
// term of the open-manifold formula is out of scope.
inline FirstVariationReport first_variation_check(const ImmersionPatch& patch,
                                                  const DeformationField& nu, int p,
                                                  const std::vector<int>& resolution,
                                                  const FirstVariationOptions& opt = {}) {
  const double h = opt.t_step;
  auto total_at = [&](double t) {
    const ImmersionPatch moved = deform(patch, nu, t);
    return total_mean_curvature(build_mesh(moved, resolution), p);
  };
  const double mp1 = total_at(h), mm1 = total_at(-h);
  const double mp2 = total_at(2.0 * h), mm2 = total_at(-2.0 * h);
  FirstVariationReport rep;
  rep.lhs = (8.0 * (mp1 - mm1) - (mp2 - mm2)) / (12.0 * h);

  const auto& nu_eff = effective_deformation(patch, nu);
  const SubmanifoldMesh mesh = build_mesh(patch, resolution);
  std::vector<double> field(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t k) {
    const Vec l = el_operator_at(patch, mesh.nodes[k], p, opt.stencil);
    const Vec v = nu_eff.value_at(mesh.nodes[k]);
    const Jet2 jet = patch.jet_at(mesh.nodes[k]);
    field[k] = l.dot(patch.ambient().metric_at(jet.value) * v);
  });
  rep.rhs = integrate(mesh, field);
  rep.abs_gap = std::abs(rep.lhs - rep.rhs);
  rep.rel_gap = rep.abs_gap / std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-300});
  return rep;
}

// ---------------------------------------------------------------------------
// Complex-submanifold checks in CP^{n+m}
// ---------------------------------------------------------------------------

struct CpnReport {
  double mixed_curvature_residual = 0.0;  // R_{iajk} = 0 and the R_{iajb} closed form
  double sff_pairing_residual = 0.0;      // second-fundamental-form J-pairing identity
  double j_alternation_residual = 0.0;    // alternating-J wedge identity on random tuples
  double holomorphy_defect = 0.0;
  std::vector<double> h_norms;      // per p: max |H^f_2p+1|
  std::vector<double> l_norms;      // per p: max |L_2p|
  double w_identity_residual = 0.0; // |W_2p-1 - c(n-2p)/(2(n-2p+1)) H^f_2p-1|
  bool pass = false;
  double tolerance = 0.0;
};

inline CpnReport cpn_checks(const ImmersionPatch& patch, const std::vector<Vec>& samples,
                            int p_max, std::uint64_t seed, double tol = 1e-5,
                            const StencilOptions& stencil = {}) {
  if (!patch.claims_complex() || !patch.ambient().is_complex())
    throw PreconditionError("cpn_checks: patch is not flagged as a complex submanifold");
  const int n = patch.intrinsic_dim(), m = patch.codim();
  const double c = patch.ambient().curvature();
  CpnReport rep;
  rep.tolerance = tol;
  rep.h_norms.assign(p_max + 1, 0.0);
  rep.l_norms.assign(p_max + 1, 0.0);
  Rng rng(seed);

  auto partner = [](int a) { return a % 2 == 0 ? a + 1 : a - 1; };
  auto psign = [](int a) { return a % 2 == 0 ? 1.0 : -1.0; };

  for (const Vec& u : samples) {
    const AdaptedFrame jf = j_adapted_frame_at(patch, u);
    rep.holomorphy_defect = std::max(rep.holomorphy_defect, jf.holomorphy_defect);
    const SffTensor sff = second_fundamental_form(patch, u, jf);
    const RelCurvTensor omega = relative_curvature(sff);
    const AmbientFrameCurvature rc = ambient_frame_curvature(patch.ambient(), jf);

    // Complex submanifold: R_{iajk} = 0 and R_{iajb} = (c/4)(d_ij d_ab + J_ij J_ab).
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < m; ++a)
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k)
            rep.mixed_curvature_residual = std::max(rep.mixed_curvature_residual, std::abs(rc.r_tntt(i, a, j, k)));
          for (int b = 0; b < m; ++b) {
            // R(e_i, e_a, e_j, e_b) = (c/4)(d_ij d_ab + <Je_i,e_j><Je_a,e_b>)
            const double jij = (partner(i) == j) ? psign(i) : 0.0;
            const double jab = (partner(a) == b) ? psign(a) : 0.0;
            const double want = 0.25 * c * ((i == j && a == b ? 1.0 : 0.0) + jij * jab);
            rep.mixed_curvature_residual =
                std::max(rep.mixed_curvature_residual, std::abs(rc.r_tntn(i, a, j, b) - want));
          }
        }

    // J-pairing of the sff: theta_{ia}(e_j) = theta_{i abar}(e_jbar) = -theta_{ibar a}(e_jbar).
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double base = sff.h[a](i, j);
          const double first = psign(a) * psign(j) * sff.h[partner(a)](i, partner(j));
          const double second = psign(i) * psign(j) * sff.h[a](partner(i), partner(j));
          rep.sff_pairing_residual = std::max(rep.sff_pairing_residual, std::abs(base - first));
          rep.sff_pairing_residual = std::max(rep.sff_pairing_residual, std::abs(base + second));
        }

    // Alternating J insertions annihilate the wedge:
    // sum_s Omega_I(X_1,..,JX_s,..,X_2p) = 0 for tangent tuples.
    for (int p = 1; 2 * p <= n && p <= p_max; ++p) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<int> I(2 * p);
        // a random ordered tuple of distinct indices
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        for (int i = 0; i < 2 * p; ++i) {
          const int pick = i + static_cast<int>(rng.uniform() * (n - i));
          std::swap(pool[i], pool[std::min(pick, n - 1)]);
          I[i] = pool[i];
        }
        std::vector<Mat> forms;
        for (int t = 0; t < p; ++t) forms.push_back(omega.slice(I[2 * t], I[2 * t + 1]));
        std::vector<Vec> args(2 * p);
        for (auto& x : args) x = rng.normal_vec(n);
        double total = 0.0;
        for (int s = 0; s < 2 * p; ++s) {
          std::vector<Vec> jargs = args;
          Vec jx = Vec::Zero(n);
          for (int i = 0; i < n; ++i) jx[partner(i)] += psign(i) * args[s][i];
          jargs[s] = jx;
          total += wedge_eval_vectors(forms, {}, jargs);
        }
        rep.j_alternation_residual = std::max(rep.j_alternation_residual, std::abs(total));
      }
    }

    for (int p = 0; p <= p_max && 2 * p <= n; ++p) {
      rep.h_norms[p] = std::max(rep.h_norms[p], h2p1_at(omega, sff, p).norm());
      const ELSample el = el_sample_at(patch, u, p, stencil);
      rep.l_norms[p] = std::max(rep.l_norms[p], el.l_chart.norm());
      if (p >= 1) {
        const Vec w = w_vector_at(omega, sff, rc, p);
        Vec expect = Vec::Zero(n + m);
        expect.tail(m) = c * (n - 2 * p) / (2.0 * (n - 2 * p + 1)) * h2p1_at(omega, sff, p - 1);
        rep.w_identity_residual = std::max(rep.w_identity_residual, (w - expect).norm());
      }
    }
  }

  rep.pass = rep.mixed_curvature_residual < tol && rep.sff_pairing_residual < tol &&
             rep.j_alternation_residual < tol && rep.w_identity_residual < tol;
  for (double v : rep.h_norms) rep.pass = rep.pass && v < tol;
  for (double v : rep.l_norms) rep.pass = rep.pass && v < tol;
  return rep;
}

// Convenience: interior sample points of a patch on a coarse grid.
inline std::vector<Vec> sample_points(const ImmersionPatch& patch, int per_axis,
                                      double margin = 0.12) {
  const int n = patch.intrinsic_dim();
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec u(n);
    for (int i = 0; i < n; ++i) {
      const double lo = patch.lo()[i], hi = patch.hi()[i];
      const double pad = patch.periodic(i) ? 0.0 : margin * (hi - lo);
      u[i] = lo + pad + (hi - lo - 2.0 * pad) * (idx[i] + 0.5) / per_axis;
    }
    out.push_back(u);
    int i = n - 1;
    while (i >= 0 && ++idx[i] == per_axis) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace curvatura
