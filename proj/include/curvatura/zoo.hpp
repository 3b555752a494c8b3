#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "curvatura/ambient.hpp"
#include "curvatura/immersion.hpp"

namespace curvatura {

namespace zoo_detail {

// ---------------------------------------------------------------------------
// Trigonometric product maps: every built-in real patch is a sum of terms
//   scale * prod_k g_k(mult_k * u_k),  g_k in {1, sin, cos},
// which differentiates exactly by the product rule.
// ---------------------------------------------------------------------------

enum class Fac { One, Sin, Cos };

struct Factor {
  Fac g = Fac::One;
  double mult = 1.0;

  double eval(int order, double t) const {
    const double a = mult * t;
    switch (g) {
      case Fac::One:
        return order == 0 ? 1.0 : 0.0;
      case Fac::Sin:
        switch (order % 4) {
          case 0: return std::sin(a);
          case 1: return mult * std::cos(a);
          case 2: return -mult * mult * std::sin(a);
          default: return -mult * mult * mult * std::cos(a);
        }
      case Fac::Cos:
        switch (order % 4) {
          case 0: return std::cos(a);
          case 1: return -mult * std::sin(a);
          case 2: return -mult * mult * std::cos(a);
          default: return mult * mult * mult * std::sin(a);
        }
    }
    return 0.0;
  }
};

struct Term {
  double scale = 1.0;
  std::vector<Factor> factors;  // one per parameter axis
};

struct TrigMap {
  int n = 0;
  int dim = 0;
  std::vector<std::vector<Term>> coords;  // coords[a] = terms of coordinate a

  Jet2 jet(const Vec& u) const {
    Jet2 out;
    out.value = Vec::Zero(dim);
    out.d1.assign(n, Vec::Zero(dim));
    out.d2.assign(n, std::vector<Vec>(n, Vec::Zero(dim)));
    for (int a = 0; a < dim; ++a) {
      for (const Term& term : coords[a]) {
        double f[8], df[8], ddf[8];
        double prod = term.scale;
        for (int k = 0; k < n; ++k) {
          f[k] = term.factors[k].eval(0, u[k]);
          df[k] = term.factors[k].eval(1, u[k]);
          ddf[k] = term.factors[k].eval(2, u[k]);
          prod *= f[k];
        }
        out.value[a] += prod;
        for (int i = 0; i < n; ++i) {
          double di = term.scale * df[i];
          for (int k = 0; k < n; ++k)
            if (k != i) di *= f[k];
          out.d1[i][a] += di;
          for (int j = i; j < n; ++j) {
            double dij = term.scale;
            if (i == j) {
              dij *= ddf[i];
              for (int k = 0; k < n; ++k)
                if (k != i) dij *= f[k];
            } else {
              dij *= df[i] * df[j];
              for (int k = 0; k < n; ++k)
                if (k != i && k != j) dij *= f[k];
            }
            out.d2[i][j][a] += dij;
            if (i != j) out.d2[j][i][a] += dij;
          }
        }
      }
    }
    return out;
  }

  ImmersionPatch::JetFn fn() const {
    return [m = *this](const Vec& u) { return m.jet(u); };
  }
};

inline Factor one() { return {Fac::One, 1.0}; }
inline Factor fsin(double mult = 1.0) { return {Fac::Sin, mult}; }
inline Factor fcos(double mult = 1.0) { return {Fac::Cos, mult}; }

// Term builder for maps with few axes: pass one factor per axis.
inline Term term(double scale, std::vector<Factor> fs) { return Term{scale, std::move(fs)}; }

// ---------------------------------------------------------------------------
// Stereographic composition: a map X(u) into the unit sphere S^d in R^{d+1}
// becomes a map into the conformal chart, x = 2 X' / (1 + X_d), where the
// chart metric delta/(1+|x|^2/4)^2 is the round one.
// ---------------------------------------------------------------------------

inline ImmersionPatch::JetFn stereographic(ImmersionPatch::JetFn inner, int n, int d) {
  return [inner = std::move(inner), n, d](const Vec& u) {
    const Jet2 X = inner(u);
    const double s = 1.0 + X.value[d];
    Jet2 out;
    out.value = 2.0 * X.value.head(d) / s;
    out.d1.resize(n);
    for (int i = 0; i < n; ++i)
      out.d1[i] = (2.0 * X.d1[i].head(d) - out.value * X.d1[i][d]) / s;
    out.d2.assign(n, std::vector<Vec>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Vec v = (2.0 * X.d2[i][j].head(d) - out.d1[i] * X.d1[j][d] - out.d1[j] * X.d1[i][d] -
                 out.value * X.d2[i][j][d]) /
                s;
        out.d2[i][j] = v;
        out.d2[j][i] = v;
      }
    return out;
  };
}

// ---------------------------------------------------------------------------
// Holomorphic patches (complex submanifolds in affine charts and graphs).
// Each supplies closed-form complex first and second derivatives.
// ---------------------------------------------------------------------------

// Rational parametrization of the conic {z0^2+z1^2+z2^2=0} in CP^2 through
// [1-w^2 : i(1+w^2) : 2w]; in the affine chart of the first coordinate:
inline HolomorphicJet quadric_cp2_jet(Cx w) {
  const Cx D = 1.0 - w * w;
  HolomorphicJet j;
  j.value = {Cx(0, 1) * (1.0 + w * w) / D, 2.0 * w / D};
  j.d1 = {{Cx(0, 4) * w / (D * D), 2.0 * (1.0 + w * w) / (D * D)}};
  j.d2 = {{{Cx(0, 4) * (1.0 + 3.0 * w * w) / (D * D * D),
            4.0 * w * (3.0 + w * w) / (D * D * D)}}};
  return j;
}

// Graph branch of {1+z1^2+z2^2+z3^2=0} in the affine chart of CP^3.
inline HolomorphicJet quadric_cp3_jet(Cx w1, Cx w2) {
  const Cx S = 1.0 + w1 * w1 + w2 * w2;
  const Cx rt = std::sqrt(S);
  const Cx iu(0, 1);
  HolomorphicJet j;
  j.value = {w1, w2, iu * rt};
  const Cx w[2] = {w1, w2};
  j.d1.assign(2, std::vector<Cx>(3, Cx(0)));
  j.d2.assign(2, std::vector<std::vector<Cx>>(2, std::vector<Cx>(3, Cx(0))));
  j.d1[0][0] = 1.0;
  j.d1[1][1] = 1.0;
  for (int k = 0; k < 2; ++k) j.d1[k][2] = iu * w[k] / rt;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      j.d2[a][b][2] = iu * ((a == b ? 1.0 : 0.0) / rt - w[a] * w[b] / (rt * S));
  return j;
}

// Holomorphic graph (w1, w2, g(w)) in C^3, g = w1 w2 + w1^3/3.
inline HolomorphicJet holomorphic_graph_jet(Cx w1, Cx w2) {
  HolomorphicJet j;
  j.value = {w1, w2, w1 * w2 + w1 * w1 * w1 / 3.0};
  j.d1.assign(2, std::vector<Cx>(3, Cx(0)));
  j.d2.assign(2, std::vector<std::vector<Cx>>(2, std::vector<Cx>(3, Cx(0))));
  j.d1[0][0] = 1.0;
  j.d1[1][1] = 1.0;
  j.d1[0][2] = w2 + w1 * w1;
  j.d1[1][2] = w1;
  j.d2[0][0][2] = 2.0 * w1;
  j.d2[0][1][2] = 1.0;
  j.d2[1][0][2] = 1.0;
  return j;
}

inline ImmersionPatch::JetFn holomorphic_fn(int k, int l,
                                            std::function<HolomorphicJet(const Vec&)> hj) {
  return [k, l, hj = std::move(hj)](const Vec& u) {
    Jet2 out;
    holomorphic_to_real_jet(hj(u), k, l, out.value, out.d1, out.d2);
    return out;
  };
}

}  // namespace zoo_detail

// ---------------------------------------------------------------------------
// The manifold zoo
// ---------------------------------------------------------------------------

using ZooParams = std::map<std::string, double>;

struct ZooEntry {
  std::string name;
  int n = 0;
  int m = 0;
  std::string ambient;
  ZooParams params;                         // defaults, overridable
  std::map<std::string, double> reference;  // closed-form reference values
  std::vector<int> default_resolution;
  std::function<ImmersionPatch(const ZooParams&)> build;
  bool closed = true;  // covers a closed manifold (periodic or pole-closed)
};

namespace zoo_detail {

inline double get(const ZooParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// n-sphere of radius r in R^{n+1}, lat-long coordinates; the first n-1 axes
// are open (0,pi) with Gauss-Legendre nodes, the last is periodic.
inline ImmersionPatch sphere_patch(int n, double r, std::vector<double> axis_scale = {}) {
  TrigMap map;
  map.n = n;
  map.dim = n + 1;
  map.coords.resize(map.dim);
  for (int a = 0; a <= n; ++a) {
    Term t;
    t.scale = r * (axis_scale.empty() ? 1.0 : axis_scale[a]);
    t.factors.assign(n, one());
    for (int k = 0; k < std::min(a, n); ++k) t.factors[k] = fsin();
    if (a < n) t.factors[a] = fcos();
    map.coords[a] = {t};
  }
  Vec lo(n), hi(n);
  std::vector<bool> per(n, false);
  for (int i = 0; i + 1 < n; ++i) {
    lo[i] = 0.0;
    hi[i] = kPi;
  }
  lo[n - 1] = 0.0;
  hi[n - 1] = 2.0 * kPi;
  per[n - 1] = true;
  return ImmersionPatch(AmbientSpace::euclidean(n + 1), n, lo, hi, per, map.fn(),
                        "sphere" + std::to_string(n));
}

inline ImmersionPatch torus_of_revolution(double R, double a) {
  TrigMap map;
  map.n = 2;
  map.dim = 3;
  map.coords = {
      {term(R, {one(), fcos()}), term(a, {fcos(), fcos()})},
      {term(R, {one(), fsin()}), term(a, {fcos(), fsin()})},
      {term(a, {fsin(), one()})},
  };
  Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 2.0 * kPi);
  return ImmersionPatch(AmbientSpace::euclidean(3), 2, lo, hi, {true, true}, map.fn(),
                        "torus-of-revolution");
}

// Product torus S^1(a) x S^1(b) inside S^3(1), in the stereographic chart.
inline ImmersionPatch product_torus_s3(double a) {
  const double b = std::sqrt(1.0 - a * a);
  TrigMap inner;
  inner.n = 2;
  inner.dim = 4;
  inner.coords = {{term(a, {fcos(), one()})},
                  {term(a, {fsin(), one()})},
                  {term(b, {one(), fcos()})},
                  {term(b, {one(), fsin()})}};
  Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 2.0 * kPi);
  return ImmersionPatch(AmbientSpace::space_form(3, 1.0), 2, lo, hi, {true, true},
                        stereographic(inner.fn(), 2, 3), "product-torus-s3");
}

inline ImmersionPatch great_sphere_s3() {
  TrigMap inner;
  inner.n = 2;
  inner.dim = 4;
  inner.coords = {{term(1.0, {fsin(), fcos()})},
                  {term(1.0, {fsin(), fsin()})},
                  {term(1.0, {fcos(), one()})},
                  {}};
  Vec lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << kPi, 2.0 * kPi;
  return ImmersionPatch(AmbientSpace::space_form(3, 1.0), 2, lo, hi, {false, true},
                        stereographic(inner.fn(), 2, 3), "great-sphere-s3");
}

inline ImmersionPatch flat_torus_r4() {
  TrigMap map;
  map.n = 2;
  map.dim = 4;
  map.coords = {{term(1.0, {fcos(), one()})},
                {term(1.0, {fsin(), one()})},
                {term(1.0, {one(), fcos()})},
                {term(1.0, {one(), fsin()})}};
  Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 2.0 * kPi);
  return ImmersionPatch(AmbientSpace::euclidean(4), 2, lo, hi, {true, true}, map.fn(),
                        "flat-torus-r4");
}

inline ImmersionPatch closed_curve_r3() {
  TrigMap map;
  map.n = 1;
  map.dim = 3;
  map.coords = {{term(1.0, {fcos()})}, {term(1.0, {fsin()})}, {term(0.5, {fsin(2.0)})}};
  Vec lo = Vec::Zero(1), hi = Vec::Constant(1, 2.0 * kPi);
  return ImmersionPatch(AmbientSpace::euclidean(3), 1, lo, hi, {true}, map.fn(),
                        "closed-curve-r3");
}

// Flat product torus embedded in R^d with a seeded low-frequency trig
// perturbation in every ambient coordinate.
inline ImmersionPatch fourier_perturbed_torus(std::uint64_t seed, double amplitude, int dim) {
  if (dim < 3) throw PreconditionError("fourier-perturbed-torus: ambient dim must be >= 3");
  TrigMap map;
  map.n = 2;
  map.dim = dim;
  map.coords.resize(dim);
  if (dim >= 4) {
    map.coords[0] = {term(1.0, {fcos(), one()})};
    map.coords[1] = {term(1.0, {fsin(), one()})};
    map.coords[2] = {term(1.0, {one(), fcos()})};
    map.coords[3] = {term(1.0, {one(), fsin()})};
  } else {
    // dim == 3 reuses the revolution torus terms
    map.coords = {
        {term(2.0, {one(), fcos()}), term(1.0, {fcos(), fcos()})},
        {term(2.0, {one(), fsin()}), term(1.0, {fcos(), fsin()})},
        {term(1.0, {fsin(), one()})},
    };
  }
  Rng rng(seed);
  auto axis_factor = [](int kind, double mult) {
    // kind 0 -> cos, 1 -> sin; mult 0 collapses to the constant factor
    if (mult == 0.0) return one();
    return kind == 0 ? fcos(mult) : fsin(mult);
  };
  for (int a = 0; a < dim; ++a)
    for (int k1 = 0; k1 <= 2; ++k1)
      for (int k2 = 0; k2 <= 2; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        for (int s1 = 0; s1 < (k1 ? 2 : 1); ++s1)
          for (int s2 = 0; s2 < (k2 ? 2 : 1); ++s2) {
            const double coef = amplitude * rng.normal() / (1.0 + k1 + k2);
            map.coords[a].push_back(
                term(coef, {axis_factor(s1, double(k1)), axis_factor(s2, double(k2))}));
          }
      }
  Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 2.0 * kPi);
  return ImmersionPatch(AmbientSpace::euclidean(dim), 2, lo, hi, {true, true}, map.fn(),
                        "fourier-perturbed-torus");
}

// A closed torus inside the affine chart of CP^2: the standard product
// torus (which is Lagrangian, so its mixed curvature components all vanish)
// plus a seeded low-frequency perturbation that breaks both holomorphy and
// the Lagrangian condition. A genuinely generic closed submanifold of a
// curved, non-constant-curvature ambient.
inline ImmersionPatch torus_cp2(double c, double rho, double amplitude, std::uint64_t seed) {
  TrigMap map;
  map.n = 2;
  map.dim = 4;
  map.coords = {{term(rho, {fcos(), one()})},
                {term(rho, {fsin(), one()})},
                {term(rho, {one(), fcos()})},
                {term(rho, {one(), fsin()})}};
  Rng rng(seed);
  for (int a = 0; a < 4; ++a)
    for (int k1 = 0; k1 <= 1; ++k1)
      for (int k2 = 0; k2 <= 1; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        for (int s1 = 0; s1 < (k1 ? 2 : 1); ++s1)
          for (int s2 = 0; s2 < (k2 ? 2 : 1); ++s2) {
            auto f1 = k1 ? (s1 ? fsin(double(k1)) : fcos(double(k1))) : one();
            auto f2 = k2 ? (s2 ? fsin(double(k2)) : fcos(double(k2))) : one();
            map.coords[a].push_back(term(amplitude * rng.normal(), {f1, f2}));
          }
      }
  Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 2.0 * kPi);
  return ImmersionPatch(AmbientSpace::fubini_study(2, c), 2, lo, hi, {true, true}, map.fn(),
                        "torus-cp2");
}

inline ImmersionPatch linear_cp1_cp2(double c) {
  auto hj = [](const Vec& u) {
    HolomorphicJet j;
    j.value = {Cx(u[0], u[1]), Cx(0, 0)};
    j.d1 = {{Cx(1, 0), Cx(0, 0)}};
    j.d2 = {{{Cx(0, 0), Cx(0, 0)}}};
    return j;
  };
  Vec lo = Vec::Constant(2, -1.0), hi = Vec::Constant(2, 1.0);
  ImmersionPatch p(AmbientSpace::fubini_study(2, c), 2, lo, hi, {false, false},
                   holomorphic_fn(1, 2, hj), "linear-cp1-cp2");
  p.set_claims_complex(true);
  return p;
}

inline ImmersionPatch quadric_cp2(double c) {
  auto hj = [](const Vec& u) { return quadric_cp2_jet(Cx(u[0], u[1])); };
  Vec lo = Vec::Constant(2, -0.6), hi = Vec::Constant(2, 0.6);
  ImmersionPatch p(AmbientSpace::fubini_study(2, c), 2, lo, hi, {false, false},
                   holomorphic_fn(1, 2, hj), "quadric-cp2");
  p.set_claims_complex(true);
  return p;
}

inline ImmersionPatch quadric_cp3(double c) {
  auto hj = [](const Vec& u) { return quadric_cp3_jet(Cx(u[0], u[1]), Cx(u[2], u[3])); };
  Vec lo = Vec::Constant(4, -0.4), hi = Vec::Constant(4, 0.4);
  ImmersionPatch p(AmbientSpace::fubini_study(3, c), 4, lo, hi,
                   {false, false, false, false}, holomorphic_fn(2, 3, hj), "quadric-cp3");
  p.set_claims_complex(true);
  return p;
}

inline ImmersionPatch holomorphic_graph_c3() {
  auto hj = [](const Vec& u) { return holomorphic_graph_jet(Cx(u[0], u[1]), Cx(u[2], u[3])); };
  Vec lo = Vec::Constant(4, -0.7), hi = Vec::Constant(4, 0.7);
  return ImmersionPatch(AmbientSpace::euclidean(6), 4, lo, hi, {false, false, false, false},
                        holomorphic_fn(2, 3, hj), "holomorphic-graph-c3");
}

// Negative control: the quadric patch with a non-holomorphic bump added to
// one chart coordinate. It still *claims* to be complex so the complex-
// submanifold checks run and must fail on it.
inline ImmersionPatch nonholomorphic_cp2_control(double c, double eps) {
  auto base = [](const Vec& u) { return quadric_cp2_jet(Cx(u[0], u[1])); };
  ImmersionPatch::JetFn jets = [base, eps](const Vec& u) {
    Jet2 out;
    holomorphic_to_real_jet(base(u), 1, 2, out.value, out.d1, out.d2);
    out.value[2] += eps * u[0] * u[0];
    out.d1[0][2] += 2.0 * eps * u[0];
    out.d2[0][0][2] += 2.0 * eps;
    return out;
  };
  Vec lo = Vec::Constant(2, -0.6), hi = Vec::Constant(2, 0.6);
  ImmersionPatch p(AmbientSpace::fubini_study(2, c), 2, lo, hi, {false, false}, jets,
                   "nonholomorphic-cp2-control");
  p.set_claims_complex(true);
  return p;
}

}  // namespace zoo_detail

inline const std::vector<ZooEntry>& zoo() {
  using namespace zoo_detail;
  static const std::vector<ZooEntry> entries = [] {
    std::vector<ZooEntry> z;
    z.push_back({"sphere", 2, 1, "euclidean",
                 {{"n", 2.0}, {"r", 1.0}},
                 {{"area(n=2,r)", 4.0 * kPi}, {"Kf2", 1.0}},
                 {16, 32},
                 [](const ZooParams& p) {
                   const int n = static_cast<int>(get(p, "n", 2.0));
                   if (n < 2 || n > 3) throw PreconditionError("sphere: n must be 2 or 3");
                   return sphere_patch(n, get(p, "r", 1.0));
                 }});
    z.push_back({"ellipsoid", 2, 1, "euclidean",
                 {{"a", 1.0}, {"b", 1.3}, {"c", 0.8}},
                 {{"total_gauss_curvature", 4.0 * kPi}},
                 {24, 48},
                 [](const ZooParams& p) {
                   ImmersionPatch s = sphere_patch(
                       2, 1.0, {get(p, "a", 1.0), get(p, "b", 1.3), get(p, "c", 0.8)});
                   s.set_name("ellipsoid");
                   return s;
                 }});
    z.push_back({"torus-of-revolution", 2, 1, "euclidean",
                 {{"R", 2.0}, {"a", 1.0}},
                 {{"area", 4.0 * kPi * kPi * 2.0}, {"total_K2", 0.0}},
                 {48, 48},
                 [](const ZooParams& p) {
                   return torus_of_revolution(get(p, "R", 2.0), get(p, "a", 1.0));
                 }});
    z.push_back({"flat-torus-r4", 2, 2, "euclidean",
                 {},
                 {{"area", 4.0 * kPi * kPi}, {"Kf2", 0.0}},
                 {32, 32},
                 [](const ZooParams&) { return flat_torus_r4(); }});
    z.push_back({"clifford-torus-s3", 2, 1, "space-form c=1",
                 {},
                 {{"Kf2", -1.0}, {"KM2", 0.0}, {"area", 2.0 * kPi * kPi}},
                 {32, 32},
                 [](const ZooParams&) {
                   ImmersionPatch p = product_torus_s3(1.0 / std::sqrt(2.0));
                   p.set_name("clifford-torus-s3");
                   return p;
                 }});
    z.push_back({"product-torus-s3", 2, 1, "space-form c=1",
                 {{"a", 0.6}},
                 {},
                 {32, 32},
                 [](const ZooParams& p) { return product_torus_s3(get(p, "a", 0.6)); }});
    z.push_back({"great-sphere-s3", 2, 1, "space-form c=1",
                 {},
                 {{"h_norm", 0.0}},
                 {16, 32},
                 [](const ZooParams&) { return great_sphere_s3(); }});
    z.push_back({"fourier-perturbed-torus", 2, 2, "euclidean",
                 {{"seed", 7.0}, {"amplitude", 0.05}, {"ambient-dim", 4.0}},
                 {},
                 {32, 32},
                 [](const ZooParams& p) {
                   return fourier_perturbed_torus(
                       static_cast<std::uint64_t>(get(p, "seed", 7.0)),
                       get(p, "amplitude", 0.05),
                       static_cast<int>(get(p, "ambient-dim", 4.0)));
                 }});
    z.push_back({"closed-curve-r3", 1, 2, "euclidean",
                 {},
                 {},
                 {256},
                 [](const ZooParams&) { return closed_curve_r3(); }});
    z.push_back({"torus-cp2", 2, 2, "fubini-study c=4",
                 {{"c", 4.0}, {"rho", 0.4}, {"amplitude", 0.08}, {"seed", 5.0}},
                 {},
                 {24, 24},
                 [](const ZooParams& p) {
                   return torus_cp2(get(p, "c", 4.0), get(p, "rho", 0.4),
                                    get(p, "amplitude", 0.08),
                                    static_cast<std::uint64_t>(get(p, "seed", 5.0)));
                 }});
    z.push_back({"linear-cp1-cp2", 2, 2, "fubini-study c=4",
                 {{"c", 4.0}},
                 {{"h_norm", 0.0}},
                 {8, 8},
                 [](const ZooParams& p) { return linear_cp1_cp2(get(p, "c", 4.0)); },
                 false});
    z.push_back({"quadric-cp2", 2, 2, "fubini-study c=4",
                 {{"c", 4.0}},
                 {},
                 {8, 8},
                 [](const ZooParams& p) { return quadric_cp2(get(p, "c", 4.0)); },
                 false});
    z.push_back({"quadric-cp3", 4, 2, "fubini-study c=4",
                 {{"c", 4.0}},
                 {},
                 {5, 5, 5, 5},
                 [](const ZooParams& p) { return quadric_cp3(get(p, "c", 4.0)); },
                 false});
    z.push_back({"holomorphic-graph-c3", 4, 2, "euclidean",
                 {},
                 {},
                 {8, 8, 8, 8},
                 [](const ZooParams&) { return holomorphic_graph_c3(); },
                 false});
    z.push_back({"nonholomorphic-cp2-control", 2, 2, "fubini-study c=4",
                 {{"c", 4.0}, {"eps", 0.15}},
                 {},
                 {8, 8},
                 [](const ZooParams& p) {
                   return nonholomorphic_cp2_control(get(p, "c", 4.0), get(p, "eps", 0.15));
                 },
                 false});
    return z;
  }();
  return entries;
}

inline const ZooEntry* find_zoo_entry(const std::string& name) {
  const ZooEntry* match = nullptr;
  for (const ZooEntry& e : zoo())
    if (e.name == name) return &e;
  // Unique-prefix match ("clifford-torus" -> "clifford-torus-s3").
  for (const ZooEntry& e : zoo())
    if (e.name.rfind(name, 0) == 0) {
      if (match) return nullptr;
      match = &e;
    }
  return match;
}

inline ImmersionPatch make_zoo_patch(const std::string& name, const ZooParams& overrides = {}) {
  const ZooEntry* entry = find_zoo_entry(name);
  if (!entry) throw PreconditionError("unknown zoo manifold: " + name);
  ZooParams params = entry->params;
  for (const auto& [k, v] : overrides) params[k] = v;
  return entry->build(params);
}

}  // namespace curvatura
