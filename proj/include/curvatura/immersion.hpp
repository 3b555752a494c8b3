#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "curvatura/ambient.hpp"
#include "curvatura/errors.hpp"
#include "curvatura/numeric.hpp"
#include "curvatura/parallel.hpp"

namespace curvatura {

// 2-jet of a parametrized map u in R^n -> chart point in R^dim.
struct Jet2 {
  Vec value;
  std::vector<Vec> d1;               // d1[i] = df/du_i
  std::vector<std::vector<Vec>> d2;  // d2[i][j] = d2f/du_i du_j, symmetric
};

// A parametrized immersion of an n-dimensional box (with per-axis
// periodicity) into an ambient chart. Jets are analytic for the built-in
// zoo; from_values() falls back to central differences.
class ImmersionPatch {
 public:
  using JetFn = std::function<Jet2(const Vec&)>;
  using ValueFn = std::function<Vec(const Vec&)>;

  ImmersionPatch(AmbientSpace ambient, int n, Vec lo, Vec hi, std::vector<bool> periodic,
                 JetFn jets, std::string name = "patch")
      : ambient_(std::move(ambient)),
        n_(n),
        lo_(std::move(lo)),
        hi_(std::move(hi)),
        periodic_(std::move(periodic)),
        jets_(std::move(jets)),
        name_(std::move(name)) {
    if (lo_.size() != n_ || hi_.size() != n_ || static_cast<int>(periodic_.size()) != n_)
      throw PreconditionError("ImmersionPatch: domain description size mismatch");
  }

  // jet_step = 0 selects the default central-difference step, 1e-4 of the
  // largest domain extent.
  static ImmersionPatch from_values(AmbientSpace ambient, int n, Vec lo, Vec hi,
                                    std::vector<bool> periodic, ValueFn f, double jet_step = 0.0,
                                    std::string name = "patch") {
    if (jet_step <= 0.0) jet_step = 1e-4 * (hi - lo).maxCoeff();
    JetFn jets = [f = std::move(f), n, jet_step](const Vec& u) {
      Jet2 jet;
      jet.value = f(u);
      jet.d1.resize(n);
      jet.d2.assign(n, std::vector<Vec>(n));
      for (int i = 0; i < n; ++i) {
        Vec up = u, um = u;
        up[i] += jet_step;
        um[i] -= jet_step;
        jet.d1[i] = (f(up) - f(um)) / (2.0 * jet_step);
        jet.d2[i][i] = (f(up) - 2.0 * jet.value + f(um)) / (jet_step * jet_step);
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Vec upp = u, upm = u, ump = u, umm = u;
          upp[i] += jet_step; upp[j] += jet_step;
          upm[i] += jet_step; upm[j] -= jet_step;
          ump[i] -= jet_step; ump[j] += jet_step;
          umm[i] -= jet_step; umm[j] -= jet_step;
          jet.d2[i][j] = (f(upp) - f(upm) - f(ump) + f(umm)) / (4.0 * jet_step * jet_step);
          jet.d2[j][i] = jet.d2[i][j];
        }
      return jet;
    };
    return ImmersionPatch(std::move(ambient), n, std::move(lo), std::move(hi),
                          std::move(periodic), std::move(jets), std::move(name));
  }

  const AmbientSpace& ambient() const { return ambient_; }
  int intrinsic_dim() const { return n_; }
  int codim() const { return ambient_.dim() - n_; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  bool periodic(int axis) const { return periodic_[axis]; }
  const std::string& name() const { return name_; }
  void set_name(std::string s) { name_ = std::move(s); }

  bool claims_complex() const { return claims_complex_; }
  void set_claims_complex(bool v) { claims_complex_ = v; }

  double rank_threshold() const { return rank_threshold_; }
  void set_rank_threshold(double t) { rank_threshold_ = t; }

  double domain_scale() const { return (hi_ - lo_).maxCoeff(); }

  Vec wrap(const Vec& u) const {
    Vec w = u;
    for (int i = 0; i < n_; ++i)
      if (periodic_[i]) {
        const double len = hi_[i] - lo_[i];
        w[i] = lo_[i] + std::fmod(w[i] - lo_[i], len);
        if (w[i] < lo_[i]) w[i] += len;
      }
    return w;
  }

  // 2-jet with the periodic wrap applied and the immersion-rank invariant
  // enforced: the smallest singular value of the metric-orthonormalized
  // Jacobian must stay above the threshold.
  Jet2 jet_at(const Vec& u) const {
    Jet2 jet = jets_(wrap(u));
    const Mat gind = induced_metric(jet);
    Eigen::SelfAdjointEigenSolver<Mat> es(gind);
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > rank_threshold_ * rank_threshold_))
      throw ImmersionDegeneracyError(name_ + ": differential rank-deficient at a parameter point");
    return jet;
  }

  // Induced metric (first fundamental form) from a jet.
  Mat induced_metric(const Jet2& jet) const {
    const Mat g = ambient_.metric_at(jet.value);
    Mat gind(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        gind(i, j) = jet.d1[i].dot(g * jet.d1[j]);
        gind(j, i) = gind(i, j);
      }
    return gind;
  }

 private:
  AmbientSpace ambient_;
  int n_;
  Vec lo_, hi_;
  std::vector<bool> periodic_;
  JetFn jets_;
  std::string name_;
  bool claims_complex_ = false;
  double rank_threshold_ = 1e-6;
};

// ---------------------------------------------------------------------------
// Deformation fields
// ---------------------------------------------------------------------------

// A deformation vector field u -> nu(u), an ambient chart vector along the
// patch, with enough derivatives to build the jets of the deformed family.
class DeformationField {
 public:
  using JetFn = std::function<Jet2(const Vec&)>;

  explicit DeformationField(JetFn jets) : jets_(std::move(jets)) {}

  static DeformationField constant(const Vec& v, int n) {
    return DeformationField([v, n](const Vec&) {
      Jet2 jet;
      jet.value = v;
      jet.d1.assign(n, Vec::Zero(v.size()));
      jet.d2.assign(n, std::vector<Vec>(n, Vec::Zero(v.size())));
      return jet;
    });
  }

  // nu(u) = P(f(u)) for a quadratic ambient polynomial field
  //   P_A(x) = c_A + sum_B L_AB x_B + sum_BC Q_A(B,C) x_B x_C.
  // Factoring through f keeps the field smooth on the manifold even where
  // the parametrization itself degenerates (lat-long poles).
  static DeformationField ambient_polynomial(const ImmersionPatch& patch, Vec c, Mat L,
                                             std::vector<Mat> Q) {
    const int dim = patch.ambient().dim();
    const int n = patch.intrinsic_dim();
    return DeformationField([patch, c = std::move(c), L = std::move(L), Q = std::move(Q), dim,
                             n](const Vec& u) {
      const Jet2 base = patch.jet_at(u);
      const Vec& x = base.value;
      Jet2 jet;
      jet.value = Vec(dim);
      for (int a = 0; a < dim; ++a) jet.value[a] = c[a] + L.row(a).dot(x) + x.dot(Q[a] * x);
      Mat jac(dim, dim);  // dP_A/dx_B
      for (int a = 0; a < dim; ++a) jac.row(a) = L.row(a) + 2.0 * (Q[a] * x).transpose();
      jet.d1.resize(n);
      for (int i = 0; i < n; ++i) jet.d1[i] = jac * base.d1[i];
      jet.d2.assign(n, std::vector<Vec>(n));
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Vec v = jac * base.d2[i][j];
          for (int a = 0; a < dim; ++a) v[a] += 2.0 * base.d1[i].dot(Q[a] * base.d1[j]);
          jet.d2[i][j] = v;
          jet.d2[j][i] = v;
        }
      return jet;
    });
  }

  // Same field windowed by prod_k s_k^2 (1-s_k)^2 over the non-periodic axes
  // (value and first derivative vanish at the parameter boundary), so open
  // patches can be deformed without waking the dropped boundary term.
  static DeformationField bump_windowed(const ImmersionPatch& patch, DeformationField base) {
    const int n = patch.intrinsic_dim();
    std::vector<int> axes;
    for (int i = 0; i < n; ++i)
      if (!patch.periodic(i)) axes.push_back(i);
    if (axes.empty()) return base;
    const Vec lo = patch.lo(), hi = patch.hi();
    return DeformationField([base = std::move(base), axes, lo, hi, n](const Vec& u) {
      const Jet2 w = base.jet_at(u);
      // b(u) = prod 16 s^2 (1-s)^2 and its derivatives along the windowed axes
      double b = 1.0;
      Vec db = Vec::Zero(n);
      Mat ddb = Mat::Zero(n, n);
      std::vector<double> f(n, 1.0), f1(n, 0.0), f2(n, 0.0);
      for (int k : axes) {
        const double range = hi[k] - lo[k];
        const double s = (u[k] - lo[k]) / range;
        f[k] = 16.0 * s * s * (1.0 - s) * (1.0 - s);
        f1[k] = 16.0 * (2.0 * s * (1.0 - s) * (1.0 - s) - 2.0 * s * s * (1.0 - s)) / range;
        f2[k] = 16.0 * (2.0 * (1.0 - s) * (1.0 - s) - 8.0 * s * (1.0 - s) + 2.0 * s * s) /
                (range * range);
      }
      for (int k = 0; k < n; ++k) b *= f[k];
      for (int i = 0; i < n; ++i) {
        double v = f1[i];
        for (int k = 0; k < n; ++k)
          if (k != i) v *= f[k];
        db[i] = v;
        for (int j = i; j < n; ++j) {
          double w2 = (i == j) ? f2[i] : f1[i] * f1[j];
          for (int k = 0; k < n; ++k)
            if (k != i && k != j) w2 *= f[k];
          ddb(i, j) = w2;
          ddb(j, i) = w2;
        }
      }
      Jet2 out;
      out.value = b * w.value;
      out.d1.resize(n);
      for (int i = 0; i < n; ++i) out.d1[i] = db[i] * w.value + b * w.d1[i];
      out.d2.assign(n, std::vector<Vec>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out.d2[i][j] = ddb(i, j) * w.value + db[i] * w.d1[j] + db[j] * w.d1[i] + b * w.d2[i][j];
      return out;
    });
  }

  static DeformationField random_ambient_polynomial(const ImmersionPatch& patch,
                                                    std::uint64_t seed, double scale = 1.0) {
    const int dim = patch.ambient().dim();
    Rng rng(seed);
    Vec c(dim);
    Mat L(dim, dim);
    std::vector<Mat> Q(dim, Mat::Zero(dim, dim));
    for (int a = 0; a < dim; ++a) c[a] = scale * rng.normal();
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) L(a, b) = 0.5 * scale * rng.normal();
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int e = b; e < dim; ++e) {
          Q[a](b, e) = 0.25 * scale * rng.normal();
          Q[a](e, b) = Q[a](b, e);
        }
    return ambient_polynomial(patch, std::move(c), std::move(L), std::move(Q));
  }

  Jet2 jet_at(const Vec& u) const { return jets_(u); }
  Vec value_at(const Vec& u) const { return jets_(u).value; }

 private:
  JetFn jets_;
};

// f_t(u) = f(u) + t nu(u) in chart coordinates. On the conformal and affine
// charts every chart point is a model point, so the retraction is the
// identity and the effective deformation vector equals nu itself.
inline ImmersionPatch deform(const ImmersionPatch& patch, const DeformationField& nu, double t) {
  ImmersionPatch::JetFn jets = [patch, nu, t](const Vec& u) {
    Jet2 base = patch.jet_at(u);
    if (t == 0.0) return base;
    const Jet2 dj = nu.jet_at(u);
    const int n = patch.intrinsic_dim();
    base.value += t * dj.value;
    for (int i = 0; i < n; ++i) base.d1[i] += t * dj.d1[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) base.d2[i][j] += t * dj.d2[i][j];
    return base;
  };
  ImmersionPatch out(patch.ambient(), patch.intrinsic_dim(), patch.lo(), patch.hi(),
                     [&patch] {
                       std::vector<bool> per(patch.intrinsic_dim());
                       for (int i = 0; i < patch.intrinsic_dim(); ++i) per[i] = patch.periodic(i);
                       return per;
                     }(),
                     std::move(jets), patch.name() + "+t*nu");
  out.set_claims_complex(false);
  out.set_rank_threshold(patch.rank_threshold());
  return out;
}

// d f_t / dt at t = 0. Chart-linear families make this nu exactly; kept as a
// named hook so every variational comparison routes through one place.
inline const DeformationField& effective_deformation(const ImmersionPatch&,
                                                     const DeformationField& nu) {
  return nu;
}

// ---------------------------------------------------------------------------
// Meshes and integration
// ---------------------------------------------------------------------------

// Product quadrature grid over the parameter box with the induced volume
// element at every node. Periodic axes use the uniform (trapezoidal) rule,
// non-periodic axes Gauss-Legendre nodes.
struct SubmanifoldMesh {
  ImmersionPatch patch;
  std::vector<Vec> nodes;
  std::vector<double> weights;  // parameter-space quadrature weights
  std::vector<double> dvol;     // sqrt(det induced metric) per node
  std::vector<int> resolution;
  double min_spacing = 0.0;

  std::size_t size() const { return nodes.size(); }
};

inline SubmanifoldMesh build_mesh(const ImmersionPatch& patch, const std::vector<int>& res) {
  const int n = patch.intrinsic_dim();
  if (static_cast<int>(res.size()) != n)
    throw PreconditionError("build_mesh: resolution entries must match intrinsic dimension");
  for (int r : res)
    if (r < 4) throw PreconditionError("build_mesh: resolution must be at least 4 per axis");

  std::vector<std::vector<double>> axis_nodes(n), axis_weights(n);
  double min_spacing = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double lo = patch.lo()[i], hi = patch.hi()[i];
    if (patch.periodic(i)) {
      const double hstep = (hi - lo) / res[i];
      for (int k = 0; k < res[i]; ++k) {
        axis_nodes[i].push_back(lo + k * hstep);
        axis_weights[i].push_back(hstep);
      }
      min_spacing = std::min(min_spacing, hstep);
    } else {
      gauss_legendre(res[i], lo, hi, axis_nodes[i], axis_weights[i]);
      for (std::size_t k = 1; k < axis_nodes[i].size(); ++k)
        min_spacing = std::min(min_spacing, axis_nodes[i][k] - axis_nodes[i][k - 1]);
    }
  }

  SubmanifoldMesh mesh{patch, {}, {}, {}, res, min_spacing};
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= axis_nodes[i].size();
  mesh.nodes.resize(total);
  mesh.weights.resize(total);
  mesh.dvol.resize(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    Vec u(n);
    double w = 1.0;
    for (int i = n - 1; i >= 0; --i) {
      const std::size_t k = rem % axis_nodes[i].size();
      rem /= axis_nodes[i].size();
      u[i] = axis_nodes[i][k];
      w *= axis_weights[i][k];
    }
    mesh.nodes[flat] = u;
    mesh.weights[flat] = w;
  }
  parallel_for(total, [&](std::size_t k) {
    const Jet2 jet = mesh.patch.jet_at(mesh.nodes[k]);
    const double det = mesh.patch.induced_metric(jet).determinant();
    if (!(det > 0.0))
      throw ImmersionDegeneracyError("build_mesh: degenerate induced metric at node " +
                                     std::to_string(k));
    mesh.dvol[k] = std::sqrt(det);
  });
  return mesh;
}

// Integral of a per-node scalar field against the induced volume element,
// reduced by deterministic pairwise summation.
inline double integrate(const SubmanifoldMesh& mesh, std::span<const double> field) {
  if (field.size() != mesh.size())
    throw PreconditionError("integrate: field size does not match mesh");
  std::vector<double> terms(mesh.size());
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    if (!std::isfinite(field[k]))
      throw NumericError("integrate: non-finite field value at node " + std::to_string(k));
    terms[k] = mesh.weights[k] * mesh.dvol[k] * field[k];
  }
  return pairwise_sum(terms);
}

// Evaluates fn at every node (in parallel) and integrates.
inline double integrate_fn(const SubmanifoldMesh& mesh,
                           const std::function<double(std::size_t, const Vec&)>& fn) {
  std::vector<double> field(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t k) { field[k] = fn(k, mesh.nodes[k]); });
  return integrate(mesh, field);
}

inline double submanifold_volume(const SubmanifoldMesh& mesh) {
  return integrate_fn(mesh, [](std::size_t, const Vec&) { return 1.0; });
}

}  // namespace curvatura
