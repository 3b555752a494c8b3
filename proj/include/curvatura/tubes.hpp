#pragma once

#include <complex>
#include <vector>

#include "curvatura/invariants.hpp"
#include "curvatura/variational.hpp"

namespace curvatura {

// ---------------------------------------------------------------------------
// Weyl-Gray tube formula. V(M^f(r)) is the volume of the tubular
// hypersurface at radius r of M^n in the space form of curvature c:
//   V = sum_p C_{m+2p-1}/(2^{2p} pi^p p!) binom(n,2p) (2p)! M_2p
//       cos(r sqrt(c))^{n-2p} (sin(r sqrt(c))/sqrt(c))^{m+2p-1},
// sin and cos taken as complex functions so c < 0 lands on the hyperbolic
// expressions; the imaginary residue must cancel to roundoff.
// ---------------------------------------------------------------------------

// The p-th summand of the formula (real part, with the imaginary residue of
// the complex trig evaluation checked against roundoff).
inline std::vector<double> weyl_gray_terms(std::span<const double> totals, int n, int m, double c,
                                           double r) {
  std::vector<double> terms;
  for (int p = 0; p < static_cast<int>(totals.size()); ++p) {
    if (2 * p > n) break;
    std::complex<double> costerm, sinterm;
    if (c == 0.0) {
      costerm = 1.0;
      sinterm = r;
    } else {
      const std::complex<double> sc = std::sqrt(std::complex<double>(c, 0.0));
      costerm = std::cos(r * sc);
      sinterm = std::sin(r * sc) / sc;
    }
    const double coeff = unit_sphere_volume(m + 2 * p - 1) /
                         (std::pow(2.0, 2 * p) * std::pow(kPi, p) * factorial(p)) *
                         binomial(n, 2 * p) * factorial(2 * p);
    const std::complex<double> term =
        coeff * totals[p] * std::pow(costerm, n - 2 * p) * std::pow(sinterm, m + 2 * p - 1);
    if (std::abs(term.imag()) > 1e-12 * std::max(1.0, std::abs(term.real())))
      throw NumericError("weyl_gray: complex trig evaluation left an imaginary residue");
    terms.push_back(term.real());
  }
  return terms;
}

inline double weyl_gray_volume(std::span<const double> totals /* M_0, M_2, ... */, int n, int m,
                               double c, double r) {
  double total = 0.0;
  for (double t : weyl_gray_terms(totals, n, m, c, r)) total += t;
  return total;
}

// Total invariants M_0, M_2, ..., M_{2[n/2]} of a meshed patch.
inline std::vector<double> total_invariants(const SubmanifoldMesh& mesh) {
  const int n = mesh.patch.intrinsic_dim();
  std::vector<std::vector<double>> fields(n / 2 + 1, std::vector<double>(mesh.size()));
  parallel_for(mesh.size(), [&](std::size_t k) {
    const PointState st = point_state(mesh.patch, mesh.nodes[k]);
    for (int p = 0; 2 * p <= n; ++p) fields[p][k] = k2p_at(st.omega, p);
  });
  std::vector<double> totals(n / 2 + 1);
  for (int p = 0; 2 * p <= n; ++p) totals[p] = integrate(mesh, fields[p]);
  return totals;
}

// ---------------------------------------------------------------------------
// Independent numeric tube oracle (euclidean ambient): the tubular
// hypersurface area element is r^{m-1} det(I - r S_xi) over M x S^{m-1},
// and det(I - r S_xi) = sum_k (-r)^k sigma_k(S_xi) integrates exactly in xi
// by the Wick moments.
// ---------------------------------------------------------------------------

// Focal-radius estimate: 1 / sup |principal curvature| over the mesh, the
// sup over normal directions taken on a deterministic sample.
inline double max_tube_radius(const SubmanifoldMesh& mesh, int xi_samples = 64) {
  std::vector<double> worst(mesh.size(), 0.0);
  parallel_for(mesh.size(), [&](std::size_t k) {
    const PointState st = point_state(mesh.patch, mesh.nodes[k]);
    const int m = st.sff.m;
    double rho = 0.0;
    Rng rng(2024);
    const int count = (m == 1) ? 1 : xi_samples;
    for (int s = 0; s < count; ++s) {
      Vec xi = (m == 1) ? Vec::Ones(1) : Vec(rng.normal_vec(m).normalized());
      Eigen::SelfAdjointEigenSolver<Mat> es(shape_operator(st.sff, xi));
      rho = std::max({rho, std::abs(es.eigenvalues().minCoeff()),
                      std::abs(es.eigenvalues().maxCoeff())});
    }
    worst[k] = rho;
  });
  double rho = 0.0;
  for (double v : worst) rho = std::max(rho, v);
  return rho > 0.0 ? 1.0 / rho : std::numeric_limits<double>::infinity();
}

inline double tube_volume_numeric(const SubmanifoldMesh& mesh, double r) {
  if (mesh.patch.ambient().kind() != AmbientKind::Euclidean)
    throw PreconditionError("tube_volume_numeric: euclidean ambient only");
  const double rmax = max_tube_radius(mesh);
  if (!(r > 0.0) || r >= rmax)
    throw FocalRadiusError("tube_volume_numeric: radius outside validity window, max admissible r = " +
                           std::to_string(rmax));
  const int n = mesh.patch.intrinsic_dim();
  const int m = mesh.patch.codim();
  std::vector<double> field(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t k) {
    const PointState st = point_state(mesh.patch, mesh.nodes[k]);
    double v = 0.0;
    for (int j = 0; j <= n; ++j) v += std::pow(-r, j) * sigma_k_normal_integral(st.sff, j);
    field[k] = std::pow(r, m - 1) * v;
  });
  return integrate(mesh, field);
}

struct TubeReport {
  std::vector<double> radii;
  std::vector<double> v_formula;
  std::vector<double> v_numeric;                   // euclidean ambient only, else empty
  std::vector<std::vector<double>> contributions;  // per radius: the p-th summands
  std::vector<double> totals;                      // M_0, M_2, ...
  std::vector<double> sphere_constants;            // C_{m+2p-1} per p
  double max_radius = 0.0;
};

inline TubeReport tube_report(const SubmanifoldMesh& mesh, std::vector<double> radii = {}) {
  TubeReport rep;
  rep.totals = total_invariants(mesh);
  rep.max_radius = max_tube_radius(mesh);
  const bool euclidean = mesh.patch.ambient().kind() == AmbientKind::Euclidean;
  if (radii.empty())
    radii = {0.3 * rep.max_radius, 0.5 * rep.max_radius, 0.7 * rep.max_radius};
  rep.radii = radii;
  const int n = mesh.patch.intrinsic_dim(), m = mesh.patch.codim();
  for (std::size_t p = 0; p < rep.totals.size(); ++p)
    rep.sphere_constants.push_back(unit_sphere_volume(m + 2 * static_cast<int>(p) - 1));
  for (double r : radii) {
    rep.contributions.push_back(
        weyl_gray_terms(rep.totals, n, m, mesh.patch.ambient().curvature(), r));
    double v = 0.0;
    for (double t : rep.contributions.back()) v += t;
    rep.v_formula.push_back(v);
    if (euclidean) rep.v_numeric.push_back(tube_volume_numeric(mesh, r));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Austerity: principal curvatures in every normal direction occur in
// oppositely signed pairs.
// ---------------------------------------------------------------------------

struct AusterityReport {
  int xi_samples = 0;
  double pairing_residual = 0.0;            // max_k |l_k + l_{n+1-k}| over samples
  std::vector<double> signed_k2p_min;       // per p: min over nodes of (-1)^p K^f_2p
  std::vector<double> h_odd_norm_max;       // per p: max |H^f_2p+1|
  bool austere = false;
  double tolerance = 0.0;
};

inline AusterityReport austerity_check(const SubmanifoldMesh& mesh, int xi_samples_per_point = 32,
                                       std::uint64_t seed = 1, double tol = 1e-6) {
  const int n = mesh.patch.intrinsic_dim();
  const int m = mesh.patch.codim();
  AusterityReport rep;
  rep.tolerance = tol;
  rep.xi_samples = (m == 1) ? 2 : xi_samples_per_point;
  rep.signed_k2p_min.assign(n / 2 + 1, std::numeric_limits<double>::infinity());
  rep.h_odd_norm_max.assign(n / 2 + 1, 0.0);

  struct NodeOut {
    double residual;
    std::vector<double> signed_k2p;
    std::vector<double> h_norm;
  };
  std::vector<NodeOut> out(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t k) {
    const PointState st = point_state(mesh.patch, mesh.nodes[k]);
    Rng rng(seed + k);
    double resid = 0.0;
    for (int s = 0; s < rep.xi_samples; ++s) {
      Vec xi;
      if (m == 1)
        xi = (s == 0) ? Vec::Ones(1) : Vec(-Vec::Ones(1));
      else
        xi = rng.normal_vec(m).normalized();
      Eigen::SelfAdjointEigenSolver<Mat> es(shape_operator(st.sff, xi));
      const Vec ev = es.eigenvalues();
      for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(ev[i] + ev[n - 1 - i]));
    }
    out[k].residual = resid;
    for (int p = 0; 2 * p <= n; ++p) {
      out[k].signed_k2p.push_back((p % 2 ? -1.0 : 1.0) * k2p_at(st.omega, p));
      out[k].h_norm.push_back(h2p1_at(st.omega, st.sff, p).norm());
    }
  });
  for (const NodeOut& o : out) {
    rep.pairing_residual = std::max(rep.pairing_residual, o.residual);
    for (int p = 0; 2 * p <= n; ++p) {
      rep.signed_k2p_min[p] = std::min(rep.signed_k2p_min[p], o.signed_k2p[p]);
      rep.h_odd_norm_max[p] = std::max(rep.h_odd_norm_max[p], o.h_norm[p]);
    }
  }
  rep.austere = rep.pairing_residual < tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Tubular minimality: the four equivalent conditions of the space-form
// theory, each evaluated independently and required to agree.
//   (i)   d/dt V(M^{f_t}(r)) = 0 at several radii for a generic deformation
//   (ii)  L_2p = 0 for all p (space-form shortcut)
//   (iii) H^f_2p+1 = 0 for all p
//   (iv)  H^M_2p+1 = 0 for all p
// ---------------------------------------------------------------------------

struct TubularMinimalityReport {
  std::vector<double> radii;
  std::vector<double> tube_derivative;  // |dV_r/dt| per radius
  double h_f_max = 0.0;
  double h_m_max = 0.0;
  double l_max = 0.0;
  bool flag_tube = false, flag_el = false, flag_hf = false, flag_hm = false;
  bool unanimous = false;
  bool tubular_minimal = false;
  double tolerance = 0.0, tube_tolerance = 0.0;
};

inline TubularMinimalityReport tubular_minimality_report(const SubmanifoldMesh& mesh,
                                                         std::uint64_t seed = 5,
                                                         double tol = 1e-5,
                                                         double tube_tol = 1e-5) {
  const AmbientKind kind = mesh.patch.ambient().kind();
  if (kind != AmbientKind::Euclidean && kind != AmbientKind::SpaceForm)
    throw PreconditionError("tubular_minimality_report: space-form ambient only");
  const int n = mesh.patch.intrinsic_dim();
  const int m = mesh.patch.codim();
  const double c = mesh.patch.ambient().curvature();

  TubularMinimalityReport rep;
  rep.tolerance = tol;
  rep.tube_tolerance = tube_tol;

  struct NodeOut {
    double hf, hm, l;
  };
  std::vector<NodeOut> out(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t k) {
    const PointState st = point_state(mesh.patch, mesh.nodes[k]);
    double hf = 0.0, hm = 0.0, l = 0.0;
    for (int p = 0; 2 * p <= n; ++p) {
      hf = std::max(hf, h2p1_at(st.omega, st.sff, p).norm());
      hm = std::max(hm, intrinsic_invariants(st.omega, st.rc, st.sff, p).h2p1.norm());
      l = std::max(l, el_spaceform_normal_coeffs(st.omega, st.sff, c, p).norm());
    }
    out[k] = {hf, hm, l};
  });
  for (const NodeOut& o : out) {
    rep.h_f_max = std::max(rep.h_f_max, o.hf);
    rep.h_m_max = std::max(rep.h_m_max, o.hm);
    rep.l_max = std::max(rep.l_max, o.l);
  }

  // Tube-volume derivative at three radii inside the validity window for one
  // seeded deformation, Richardson central differences in t. The field is
  // windowed to vanish at any non-periodic parameter boundary so open patches
  // are probed with compactly supported variations.
  const double rmax = max_tube_radius(mesh);
  rep.radii = {0.3 * rmax, 0.5 * rmax, 0.7 * rmax};
  const DeformationField nu = DeformationField::bump_windowed(
      mesh.patch, DeformationField::random_ambient_polynomial(mesh.patch, seed, 0.2));
  const double h = 1e-3;
  std::vector<std::vector<double>> totals_at;  // 4 t-samples
  for (double t : {-2.0 * h, -h, h, 2.0 * h}) {
    const ImmersionPatch moved = deform(mesh.patch, nu, t);
    totals_at.push_back(total_invariants(build_mesh(moved, mesh.resolution)));
  }
  for (double r : rep.radii) {
    double v[4];
    for (int s = 0; s < 4; ++s) v[s] = weyl_gray_volume(totals_at[s], n, m, c, r);
    rep.tube_derivative.push_back(std::abs((v[0] - 8.0 * v[1] + 8.0 * v[2] - v[3]) / (12.0 * h)));
  }

  rep.flag_tube = true;
  for (double d : rep.tube_derivative) rep.flag_tube = rep.flag_tube && d < tube_tol;
  rep.flag_el = rep.l_max < tol;
  rep.flag_hf = rep.h_f_max < tol;
  rep.flag_hm = rep.h_m_max < tol;
  rep.unanimous = (rep.flag_tube == rep.flag_el) && (rep.flag_el == rep.flag_hf) &&
                  (rep.flag_hf == rep.flag_hm);
  rep.tubular_minimal = rep.flag_tube && rep.flag_el && rep.flag_hf && rep.flag_hm;
  return rep;
}

}  // namespace curvatura
