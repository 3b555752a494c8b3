#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "curvatura/ambient.hpp"
#include "curvatura/errors.hpp"
#include "curvatura/immersion.hpp"
#include "curvatura/numeric.hpp"

namespace curvatura {

// Orthonormal frame e_1..e_{n+m} of the ambient tangent space along the
// submanifold, the first n columns spanning the image of df.
struct AdaptedFrame {
  Vec point;           // chart point f(u)
  Mat tangent;         // dim x n, columns e_1..e_n
  Mat normal;          // dim x m, columns e_{n+1}..e_{n+m}
  Mat tangent_coeffs;  // n x n: e_i = sum_k tangent_coeffs(i,k) df/du_k
  double gram_residual = 0.0;
  double holomorphy_defect = 0.0;  // set by the J-adapted constructor

  int n() const { return static_cast<int>(tangent.cols()); }
  int m() const { return static_cast<int>(normal.cols()); }
  int dim() const { return static_cast<int>(tangent.rows()); }

  Vec col(int A) const {  // frame vector by flat index
    return A < n() ? Vec(tangent.col(A)) : Vec(normal.col(A - n()));
  }

  // Frame coefficients -> ambient chart vector.
  Vec to_chart(const Vec& coeffs) const {
    Vec v = Vec::Zero(dim());
    for (int i = 0; i < n(); ++i) v += coeffs[i] * tangent.col(i);
    for (int a = 0; a < m(); ++a) v += coeffs[n() + a] * normal.col(a);
    return v;
  }
};

// Second fundamental form components h^alpha_ij in an adapted frame.
struct SffTensor {
  int n = 0;
  int m = 0;
  std::vector<Mat> h;  // h[alpha], each n x n symmetric

  const Mat& operator[](int alpha) const { return h[alpha]; }
};

// Relative curvature components Omega_ijkl = Omega_ij(e_k, e_l), stored with
// the antisymmetries filled in exactly from canonical entries.
class RelCurvTensor {
 public:
  explicit RelCurvTensor(int n) : n_(n), data_(std::size_t(n) * n * n * n, 0.0) {}

  int n() const { return n_; }

  double operator()(int i, int j, int k, int l) const { return data_[idx(i, j, k, l)]; }

  void set_canonical(int i, int j, int k, int l, double v) {
    // expects i < j, k < l; sign-related entries mirror the stored value
    data_[idx(i, j, k, l)] = v;
    data_[idx(j, i, k, l)] = -v;
    data_[idx(i, j, l, k)] = -v;
    data_[idx(j, i, l, k)] = v;
  }

  // Value matrix of the 2-form Omega_ij on frame pairs: W(k,l) = Omega_ijkl.
  Mat slice(int i, int j) const {
    Mat w(n_, n_);
    for (int k = 0; k < n_; ++k)
      for (int l = 0; l < n_; ++l) w(k, l) = (*this)(i, j, k, l);
    return w;
  }

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return ((std::size_t(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_;
  std::vector<double> data_;
};

namespace frame_detail {

// Gram-Schmidt step: remove from v its components along the orthonormal
// columns collected in basis (under metric g), tracking coefficient rows.
inline void project_out(const Mat& g, const std::vector<Vec>& basis, Vec& v, Mat* coeffs = nullptr,
                        int row = 0, const std::vector<int>* sources = nullptr) {
  for (std::size_t b = 0; b < basis.size(); ++b) {
    const double c = basis[b].dot(g * v);
    v -= c * basis[b];
    if (coeffs && sources) coeffs->row(row) -= c * coeffs->row((*sources)[b]);
  }
}

}  // namespace frame_detail

// Gram-Schmidt of the coordinate tangents (in pivot order) followed by a
// Gram-Schmidt completion of the standard ambient basis to the normal frame.
// Deterministic given the patch; near-dependent normal seeds are skipped.
inline AdaptedFrame adapted_frame_at(const ImmersionPatch& patch, const Vec& u,
                                     const std::vector<int>& tangent_order = {}) {
  const Jet2 jet = patch.jet_at(u);
  const int n = patch.intrinsic_dim();
  const int dim = patch.ambient().dim();
  const int m = dim - n;
  const Mat g = patch.ambient().metric_at(jet.value);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  if (!tangent_order.empty()) order = tangent_order;

  AdaptedFrame frame;
  frame.point = jet.value;
  frame.tangent = Mat::Zero(dim, n);
  frame.normal = Mat::Zero(dim, m);
  frame.tangent_coeffs = Mat::Zero(n, n);

  std::vector<Vec> built;
  for (int i = 0; i < n; ++i) {
    Vec v = jet.d1[order[i]];
    Vec coeff = Vec::Unit(n, order[i]);
    for (std::size_t b = 0; b < built.size(); ++b) {
      const double c = built[b].dot(g * v);
      v -= c * built[b];
      coeff -= c * frame.tangent_coeffs.row(b).transpose();
    }
    const double len = std::sqrt(v.dot(g * v));
    if (!(len > 1e-12))
      throw FrameDegeneracyError(patch.name() + ": tangent Gram-Schmidt pivot breakdown");
    v /= len;
    coeff /= len;
    built.push_back(v);
    frame.tangent.col(i) = v;
    frame.tangent_coeffs.row(i) = coeff.transpose();
  }

  int found = 0;
  for (int seed = 0; seed < dim && found < m; ++seed) {
    Vec v = Vec::Unit(dim, seed);
    for (const Vec& e : built) v -= e.dot(g * v) * e;
    const double len = std::sqrt(v.dot(g * v));
    if (len < 1e-6) continue;  // near-dependent seed
    v /= len;
    built.push_back(v);
    frame.normal.col(found++) = v;
  }
  if (found < m)
    throw FrameDegeneracyError(patch.name() + ": normal completion pivot breakdown");

  double resid = 0.0;
  for (std::size_t a = 0; a < built.size(); ++a)
    for (std::size_t b = 0; b < built.size(); ++b)
      resid = std::max(resid, std::abs(built[a].dot(g * built[b]) - (a == b ? 1.0 : 0.0)));
  frame.gram_residual = resid;
  return frame;
}

// J-paired adapted frame (e_2 = J e_1, e_4 = J e_3, ..., and likewise for the
// normal block), used by the complex-submanifold identity checks. For a
// non-complex patch the J-partners are projected back into the right
// subspace; the worst projection defect is recorded.
inline AdaptedFrame j_adapted_frame_at(const ImmersionPatch& patch, const Vec& u) {
  const AmbientSpace& amb = patch.ambient();
  if (!amb.is_complex())
    throw UnsupportedOperationError("j_adapted_frame_at: ambient is not fubini-study");
  const AdaptedFrame plain = adapted_frame_at(patch, u);
  const int n = plain.n(), m = plain.m(), dim = plain.dim();
  if (n % 2 || m % 2)
    throw PreconditionError("j_adapted_frame_at: tangent and normal ranks must be even");
  const Mat g = amb.metric_at(plain.point);

  double defect = 0.0;
  auto build_pairs = [&](const Mat& span_basis, int count) {
    // span_basis: orthonormal columns spanning the subspace to be re-paired.
    Mat out(dim, count);
    std::vector<Vec> built;
    int filled = 0;
    int pool = 0;
    while (filled < count) {
      Vec v;
      if (filled % 2 == 0) {
        if (pool >= count)
          throw FrameDegeneracyError(patch.name() + ": J-pairing pivot breakdown");
        v = span_basis.col(pool++);
      } else {
        const Vec jv = amb.complex_structure_at(plain.point, built.back());
        // Component of J e inside the subspace.
        Vec proj = Vec::Zero(dim);
        for (int b = 0; b < count; ++b)
          proj += span_basis.col(b).dot(g * jv) * span_basis.col(b);
        defect = std::max(defect, std::sqrt(std::max(0.0, (jv - proj).dot(g * (jv - proj)))));
        v = proj;
      }
      for (const Vec& e : built) v -= e.dot(g * v) * e;
      const double len = std::sqrt(v.dot(g * v));
      if (!(len > 1e-8)) {
        if (filled % 2 == 0) continue;  // try the next pool vector
        throw FrameDegeneracyError(patch.name() + ": J-partner collapsed under projection");
      }
      v /= len;
      built.push_back(v);
      out.col(filled++) = v;
    }
    return out;
  };

  AdaptedFrame frame;
  frame.point = plain.point;
  frame.tangent = build_pairs(plain.tangent, n);
  frame.normal = build_pairs(plain.normal, m);
  frame.tangent_coeffs = Mat::Zero(n, n);  // coefficients relative to df
  {
    // Solve df * c_i = e_i through the induced metric (exact in span).
    const Jet2 jet = patch.jet_at(u);
    Mat gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gram(i, j) = jet.d1[i].dot(g * jet.d1[j]);
    Eigen::LDLT<Mat> solver(gram);
    for (int i = 0; i < n; ++i) {
      Vec rhs(n);
      for (int k = 0; k < n; ++k) rhs[k] = jet.d1[k].dot(g * frame.tangent.col(i));
      frame.tangent_coeffs.row(i) = solver.solve(rhs).transpose();
    }
  }
  frame.holomorphy_defect = defect;
  double resid = 0.0;
  for (int a = 0; a < n + m; ++a)
    for (int b = 0; b < n + m; ++b)
      resid = std::max(resid,
                       std::abs(frame.col(a).dot(g * frame.col(b)) - (a == b ? 1.0 : 0.0)));
  frame.gram_residual = resid;
  return frame;
}

// h^alpha_ij = <nabla_{e_i} e_j, e_alpha> evaluated tensorially:
// nabla_X Y = X^k Y^l (d2 f_kl + Gamma(d1 f_k, d1 f_l)) for tangent X, Y
// frozen at u, so Gauss symmetry holds by construction.
inline SffTensor second_fundamental_form(const ImmersionPatch& patch, const Vec& u,
                                         const AdaptedFrame& frame) {
  const Jet2 jet = patch.jet_at(u);
  const int n = frame.n(), m = frame.m(), dim = frame.dim();
  const Mat g = patch.ambient().metric_at(jet.value);
  const auto gamma = patch.ambient().christoffels_at(jet.value);

  // B_kl = d2 f / du_k du_l + Gamma(df_k, df_l)
  std::vector<std::vector<Vec>> B(n, std::vector<Vec>(n));
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      Vec b = jet.d2[k][l];
      for (int cc = 0; cc < dim; ++cc) b[cc] += jet.d1[k].dot(gamma[cc] * jet.d1[l]);
      B[k][l] = b;
      B[l][k] = b;
    }

  SffTensor sff;
  sff.n = n;
  sff.m = m;
  sff.h.assign(m, Mat::Zero(n, n));
  for (int a = 0; a < m; ++a) {
    Mat P(n, n);  // <B_kl, e_alpha>
    const Vec gea = g * frame.normal.col(a);
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) {
        P(k, l) = B[k][l].dot(gea);
        P(l, k) = P(k, l);
      }
    const Mat hfull = frame.tangent_coeffs * P * frame.tangent_coeffs.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        sff.h[a](i, j) = hfull(i, j);
        sff.h[a](j, i) = hfull(i, j);
      }
  }
  return sff;
}

// (S_xi)_ij = sum_alpha xi_alpha h^alpha_ij for a unit normal xi.
inline Mat shape_operator(const SffTensor& sff, const Vec& xi) {
  if (xi.size() != sff.m) throw PreconditionError("shape_operator: xi has wrong length");
  if (std::abs(xi.norm() - 1.0) > 1e-8)
    throw PreconditionError("shape_operator: xi must be a unit normal");
  Mat s = Mat::Zero(sff.n, sff.n);
  for (int a = 0; a < sff.m; ++a) s += xi[a] * sff.h[a];
  return s;
}

// Omega_ijkl = sum_alpha (h^alpha_ik h^alpha_jl - h^alpha_il h^alpha_jk).
inline RelCurvTensor relative_curvature(const SffTensor& sff) {
  RelCurvTensor omega(sff.n);
  for (int i = 0; i < sff.n; ++i)
    for (int j = i + 1; j < sff.n; ++j)
      for (int k = 0; k < sff.n; ++k)
        for (int l = k + 1; l < sff.n; ++l) {
          double v = 0.0;
          for (int a = 0; a < sff.m; ++a)
            v += sff.h[a](i, k) * sff.h[a](j, l) - sff.h[a](i, l) * sff.h[a](j, k);
          omega.set_canonical(i, j, k, l, v);
        }
  return omega;
}

// Ambient curvature components in the adapted frame, one tensor per mixed
// index pattern used downstream. Always evaluated by feeding frame vectors
// into curvature_at, keeping a single source of sign conventions.
struct AmbientFrameCurvature {
  // R[t][t][t][t]: tangent 4-tensor for the intrinsic invariants
  std::vector<double> tttt;  // n^4
  // R_{i beta j alpha} with i,j tangent and alpha,beta normal
  std::vector<double> tntn;  // n*m*n*m, index (i, beta, j, alpha)
  // R_{i' alpha j j'} with alpha normal (vanishes in space forms)
  std::vector<double> tntt;  // n*m*n*n, index (i', alpha, j, j')
  int n = 0, m = 0;

  double r_tttt(int i, int j, int k, int l) const {
    return tttt[((std::size_t(i) * n + j) * n + k) * n + l];
  }
  double r_tntn(int i, int beta, int j, int alpha) const {
    return tntn[((std::size_t(i) * m + beta) * n + j) * m + alpha];
  }
  double r_tntt(int ip, int alpha, int j, int jp) const {
    return tntt[((std::size_t(ip) * m + alpha) * n + j) * n + jp];
  }
};

inline AmbientFrameCurvature ambient_frame_curvature(const AmbientSpace& amb,
                                                     const AdaptedFrame& frame) {
  AmbientFrameCurvature out;
  const int n = frame.n(), m = frame.m();
  out.n = n;
  out.m = m;
  out.tttt.assign(std::size_t(n) * n * n * n, 0.0);
  out.tntn.assign(std::size_t(n) * m * n * m, 0.0);
  out.tntt.assign(std::size_t(n) * m * n * n, 0.0);
  if (amb.kind() == AmbientKind::Euclidean) return out;
  const Vec& x = frame.point;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out.tttt[((std::size_t(i) * n + j) * n + k) * n + l] = amb.curvature_at(
              x, frame.tangent.col(i), frame.tangent.col(j), frame.tangent.col(k),
              frame.tangent.col(l));
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < m; ++b)
      for (int j = 0; j < n; ++j) {
        for (int a = 0; a < m; ++a)
          out.tntn[((std::size_t(i) * m + b) * n + j) * m + a] = amb.curvature_at(
              x, frame.tangent.col(i), frame.normal.col(b), frame.tangent.col(j),
              frame.normal.col(a));
        for (int jp = 0; jp < n; ++jp)
          out.tntt[((std::size_t(i) * m + b) * n + j) * n + jp] = amb.curvature_at(
              x, frame.tangent.col(i), frame.normal.col(b), frame.tangent.col(j),
              frame.tangent.col(jp));
      }
  return out;
}

}  // namespace curvatura
