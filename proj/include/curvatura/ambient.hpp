#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "curvatura/errors.hpp"
#include "curvatura/numeric.hpp"

namespace curvatura {

enum class AmbientKind { Euclidean, SpaceForm, FubiniStudy };

inline const char* to_string(AmbientKind k) {
  switch (k) {
    case AmbientKind::Euclidean: return "euclidean";
    case AmbientKind::SpaceForm: return "space-form";
    case AmbientKind::FubiniStudy: return "fubini-study";
  }
  return "?";
}

// A model Riemannian manifold presented in a single chart.
//
//  * euclidean:    R^d with the flat metric.
//  * space-form:   constant sectional curvature c in the conformal chart
//                  g_ij = delta_ij / (1 + (c/4)|x|^2)^2.  For c < 0 the chart
//                  is the ball |x|^2 < 4/|c|; for c >= 0 it is all of R^d.
//  * fubini-study: CP^d with constant holomorphic sectional curvature c > 0
//                  in one affine chart, real coordinates interleaved as
//                  (Re z_1, Im z_1, ..., Re z_d, Im z_d).
//
// Metrics and curvature tensors are closed-form; Christoffel symbols come
// from central differences of the metric (one code path for every kind).
class AmbientSpace {
 public:
  static AmbientSpace euclidean(int dim) { return AmbientSpace(AmbientKind::Euclidean, dim, 0.0); }

  static AmbientSpace space_form(int dim, double c) {
    return AmbientSpace(AmbientKind::SpaceForm, dim, c);
  }

  static AmbientSpace fubini_study(int complex_dim, double c) {
    if (c <= 0.0) throw PreconditionError("fubini-study requires c > 0");
    return AmbientSpace(AmbientKind::FubiniStudy, 2 * complex_dim, c);
  }

  AmbientKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double curvature() const { return c_; }
  bool is_complex() const { return kind_ == AmbientKind::FubiniStudy; }
  double fd_step() const { return fd_step_; }
  void set_fd_step(double h) { fd_step_ = h; }

  bool in_chart(const Vec& x) const {
    if (x.size() != dim_) return false;
    if (kind_ == AmbientKind::SpaceForm && c_ < 0.0)
      return x.squaredNorm() < 4.0 / (-c_) * (1.0 - 1e-9);
    return x.allFinite();
  }

  Mat metric_at(const Vec& x) const {
    require_chart(x);
    switch (kind_) {
      case AmbientKind::Euclidean:
        return Mat::Identity(dim_, dim_);
      case AmbientKind::SpaceForm: {
        const double f = 1.0 + 0.25 * c_ * x.squaredNorm();
        if (f <= 0.0) throw ChartDomainError("space-form chart: conformal factor not positive");
        return Mat::Identity(dim_, dim_) / (f * f);
      }
      case AmbientKind::FubiniStudy:
        return fubini_study_metric(x);
    }
    throw Error("unreachable");
  }

  // Levi-Civita symbols Gamma^C_AB from central differences of the metric.
  // Returned as gamma[C](A, B), symmetric in (A, B).
  std::vector<Mat> christoffels_at(const Vec& x) const {
    require_chart(x);
    const double h = step_at(x);
    if (kind_ == AmbientKind::SpaceForm && c_ < 0.0) {
      if (sqr(x.norm() + h) >= 4.0 / (-c_) * (1.0 - 1e-9))
        throw ChartDomainError("christoffels_at: point within one step of the chart boundary");
    }
    std::vector<Mat> dg(dim_);
    Vec xp = x, xm = x;
    for (int a = 0; a < dim_; ++a) {
      xp[a] = x[a] + h;
      xm[a] = x[a] - h;
      if (!(xp[a] > x[a] && xm[a] < x[a]))
        throw NumericError("christoffels_at: differentiation step underflow at coordinate " +
                           std::to_string(a));
      dg[a] = (metric_at(xp) - metric_at(xm)) / (2.0 * h);
      xp[a] = x[a];
      xm[a] = x[a];
    }
    const Mat ginv = metric_at(x).inverse();
    std::vector<Mat> gamma(dim_, Mat::Zero(dim_, dim_));
    for (int cidx = 0; cidx < dim_; ++cidx)
      for (int a = 0; a < dim_; ++a)
        for (int b = a; b < dim_; ++b) {
          double s = 0.0;
          for (int d = 0; d < dim_; ++d)
            s += ginv(cidx, d) * (dg[a](d, b) + dg[b](d, a) - dg[d](a, b));
          gamma[cidx](a, b) = 0.5 * s;
          gamma[cidx](b, a) = gamma[cidx](a, b);
        }
    return gamma;
  }

  // Curvature tensor R(X,Y,Z,T) in the sign convention where R(X,Y,X,Y) is
  // the (unnormalized) sectional curvature of the plane X^Y.
  double curvature_at(const Vec& x, const Vec& X, const Vec& Y, const Vec& Z,
                      const Vec& T) const {
    switch (kind_) {
      case AmbientKind::Euclidean:
        return 0.0;
      case AmbientKind::SpaceForm: {
        const Mat g = metric_at(x);
        return c_ * (ip(g, X, Z) * ip(g, Y, T) - ip(g, Y, Z) * ip(g, X, T));
      }
      case AmbientKind::FubiniStudy: {
        const Mat g = metric_at(x);
        const Vec JX = complex_structure_at(x, X);
        const Vec JY = complex_structure_at(x, Y);
        const Vec JZ = complex_structure_at(x, Z);
        return 0.25 * c_ *
               (ip(g, X, Z) * ip(g, Y, T) - ip(g, Y, Z) * ip(g, X, T) +
                ip(g, JX, Z) * ip(g, JY, T) - ip(g, JY, Z) * ip(g, JX, T) +
                2.0 * ip(g, JX, Y) * ip(g, JZ, T));
      }
    }
    throw Error("unreachable");
  }

  // Multiplication by i in the affine chart: J dx_j = dy_j, J dy_j = -dx_j.
  Vec complex_structure_at(const Vec& x, const Vec& X) const {
    if (kind_ != AmbientKind::FubiniStudy)
      throw UnsupportedOperationError("complex_structure_at: ambient is not fubini-study");
    require_chart(x);
    Vec r(dim_);
    for (int j = 0; 2 * j < dim_; ++j) {
      r[2 * j] = -X[2 * j + 1];
      r[2 * j + 1] = X[2 * j];
    }
    return r;
  }

  double inner(const Vec& x, const Vec& X, const Vec& Y) const { return ip(metric_at(x), X, Y); }

 private:
  AmbientSpace(AmbientKind kind, int dim, double c) : kind_(kind), dim_(dim), c_(c) {
    if (dim_ < 1) throw PreconditionError("ambient dimension must be positive");
  }

  static double ip(const Mat& g, const Vec& a, const Vec& b) { return a.dot(g * b); }

  void require_chart(const Vec& x) const {
    if (!in_chart(x)) throw ChartDomainError("point outside chart domain");
  }

  double step_at(const Vec& x) const { return fd_step_ * std::max(1.0, x.norm()); }

  // Fubini-Study metric from the Kahler potential log(1 + |z|^2), scaled so
  // the holomorphic sectional curvature equals c:
  //   h_jk = delta_jk/(1+|z|^2) - conj(z_j) z_k/(1+|z|^2)^2,
  //   g(X,Y) = (4/c) Re sum h_jk u_j conj(v_k).
  Mat fubini_study_metric(const Vec& x) const {
    const int d = dim_ / 2;
    std::vector<Cx> z(d);
    double zz = 0.0;
    for (int j = 0; j < d; ++j) {
      z[j] = Cx(x[2 * j], x[2 * j + 1]);
      zz += std::norm(z[j]);
    }
    const double s = 1.0 + zz;
    Mat g(dim_, dim_);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Cx hjk = -std::conj(z[j]) * z[k] / (s * s);
        if (j == k) hjk += 1.0 / s;
        const double A = (4.0 / c_) * hjk.real();
        const double B = (4.0 / c_) * hjk.imag();
        g(2 * j, 2 * k) = A;
        g(2 * j, 2 * k + 1) = B;
        g(2 * j + 1, 2 * k) = -B;
        g(2 * j + 1, 2 * k + 1) = A;
      }
    return g;
  }

  AmbientKind kind_;
  int dim_;
  double c_;
  double fd_step_ = 1e-5;
};

}  // namespace curvatura
