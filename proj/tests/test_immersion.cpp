#include "curvatura/immersion.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "curvatura/zoo.hpp"

using namespace curvatura;

namespace {

// Hand-differentiated torus of revolution, independent of the zoo's
// product-rule evaluator.
Jet2 torus_jet_reference(double R, double a, const Vec& u) {
  const double cu = std::cos(u[0]), su = std::sin(u[0]);
  const double cv = std::cos(u[1]), sv = std::sin(u[1]);
  const double rho = R + a * cu;
  Jet2 j;
  j.value = Vec(3);
  j.value << rho * cv, rho * sv, a * su;
  j.d1.resize(2);
  j.d1[0] = Vec(3);
  j.d1[0] << -a * su * cv, -a * su * sv, a * cu;
  j.d1[1] = Vec(3);
  j.d1[1] << -rho * sv, rho * cv, 0.0;
  j.d2.assign(2, std::vector<Vec>(2));
  j.d2[0][0] = Vec(3);
  j.d2[0][0] << -a * cu * cv, -a * cu * sv, -a * su;
  j.d2[0][1] = Vec(3);
  j.d2[0][1] << a * su * sv, -a * su * cv, 0.0;
  j.d2[1][0] = j.d2[0][1];
  j.d2[1][1] = Vec(3);
  j.d2[1][1] << -rho * cv, -rho * sv, 0.0;
  return j;
}

}  // namespace

TEST(Immersion, SphereJetStaysOnSphere) {
  const double r = 1.7;
  auto patch = make_zoo_patch("sphere", {{"r", r}});
  Rng rng(1);
  for (int rep = 0; rep < 10; ++rep) {
    Vec u(2);
    u << rng.uniform(0.2, kPi - 0.2), rng.uniform(0.0, 2.0 * kPi);
    EXPECT_NEAR(patch.jet_at(u).value.norm(), r, 1e-13);
  }
}

TEST(Immersion, TorusJetsMatchClosedForm) {
  const double R = 2.0, a = 1.0;
  auto patch = make_zoo_patch("torus-of-revolution", {{"R", R}, {"a", a}});
  Rng rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    Vec u(2);
    u << rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi);
    const Jet2 got = patch.jet_at(u);
    const Jet2 want = torus_jet_reference(R, a, u);
    EXPECT_LT((got.value - want.value).norm(), 1e-12);
    for (int i = 0; i < 2; ++i) EXPECT_LT((got.d1[i] - want.d1[i]).norm(), 1e-12);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_LT((got.d2[i][j] - want.d2[i][j]).norm(), 1e-12);
  }
}

TEST(Immersion, FiniteDifferenceJetsMatchAnalytic) {
  const double R = 2.0, a = 1.0;
  auto analytic = make_zoo_patch("torus-of-revolution");
  auto fd = ImmersionPatch::from_values(
      AmbientSpace::euclidean(3), 2, Vec::Zero(2), Vec::Constant(2, 2.0 * kPi), {true, true},
      [R, a](const Vec& u) { return torus_jet_reference(R, a, u).value; }, 1e-4);
  Vec u(2);
  u << 1.1, 2.3;
  const Jet2 ja = analytic.jet_at(u), jf = fd.jet_at(u);
  for (int i = 0; i < 2; ++i) EXPECT_LT((ja.d1[i] - jf.d1[i]).norm(), 1e-8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_LT((ja.d2[i][j] - jf.d2[i][j]).norm(), 1e-6);
  EXPECT_LT((jf.d2[0][1] - jf.d2[1][0]).norm(), 1e-14);
}

TEST(Immersion, PeriodicJetsAgreeAtIdentifiedBoundary) {
  auto patch = make_zoo_patch("torus-of-revolution");
  Vec u0(2), u1(2);
  u0 << 0.0, 1.0;
  u1 << 2.0 * kPi, 1.0;
  EXPECT_LT((patch.jet_at(u0).value - patch.jet_at(u1).value).norm(), 1e-12);
}

TEST(Immersion, RankDeficiencyIsDetected) {
  // A map collapsing one direction entirely.
  auto degenerate = ImmersionPatch(
      AmbientSpace::euclidean(3), 2, Vec::Zero(2), Vec::Constant(2, 1.0), {false, false},
      [](const Vec& u) {
        Jet2 j;
        j.value = Vec(3);
        j.value << u[0], 0.0, 0.0;
        j.d1 = {Vec(3), Vec(3)};
        j.d1[0] << 1.0, 0.0, 0.0;
        j.d1[1] << 0.0, 0.0, 0.0;
        j.d2.assign(2, std::vector<Vec>(2, Vec::Zero(3)));
        return j;
      });
  EXPECT_THROW(degenerate.jet_at(Vec::Constant(2, 0.5)), ImmersionDegeneracyError);
}

TEST(Immersion, TorusAreaConvergesToClosedForm) {
  auto patch = make_zoo_patch("torus-of-revolution", {{"R", 2.0}, {"a", 1.0}});
  const auto mesh = build_mesh(patch, {64, 64});
  EXPECT_NEAR(submanifold_volume(mesh), 4.0 * kPi * kPi * 2.0 * 1.0, 1e-6);
}

TEST(Immersion, SphereAreaWithPoleVanishingWeights) {
  auto patch = make_zoo_patch("sphere", {{"r", 1.0}});
  const auto mesh = build_mesh(patch, {16, 32});
  EXPECT_NEAR(submanifold_volume(mesh), 4.0 * kPi, 1e-4);
}

TEST(Immersion, CliffordTorusAreaInChart) {
  auto patch = make_zoo_patch("clifford-torus-s3");
  const auto mesh = build_mesh(patch, {32, 32});
  EXPECT_NEAR(submanifold_volume(mesh), 2.0 * kPi * kPi, 1e-8);
}

TEST(Immersion, ZeroFieldIntegratesToZero) {
  auto mesh = build_mesh(make_zoo_patch("torus-of-revolution"), {8, 8});
  std::vector<double> zeros(mesh.size(), 0.0);
  EXPECT_EQ(integrate(mesh, zeros), 0.0);
}

TEST(Immersion, OddPeriodicFieldIntegratesToRoundoff) {
  auto mesh = build_mesh(make_zoo_patch("flat-torus-r4"), {16, 16});
  const double area = submanifold_volume(mesh);
  const double val = integrate_fn(
      mesh, [](std::size_t, const Vec& u) { return std::sin(u[0]) * std::cos(3.0 * u[1]); });
  EXPECT_LT(std::abs(val) / area, 1e-14);
}

TEST(Immersion, NonFiniteFieldNamesTheNode) {
  auto mesh = build_mesh(make_zoo_patch("torus-of-revolution"), {4, 4});
  std::vector<double> field(mesh.size(), 1.0);
  field[5] = std::numeric_limits<double>::quiet_NaN();
  try {
    integrate(mesh, field);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("node 5"), std::string::npos);
  }
}

TEST(Immersion, IntegrateIsStableUnderNodeReordering) {
  auto mesh = build_mesh(make_zoo_patch("fourier-perturbed-torus"), {24, 24});
  std::vector<double> field(mesh.size());
  Rng rng(3);
  for (auto& v : field) v = rng.uniform(-1.0, 1.0);
  const double base = integrate(mesh, field);

  // Reverse the node order wholesale; the integral is the same sum.
  SubmanifoldMesh rev = mesh;
  std::reverse(rev.nodes.begin(), rev.nodes.end());
  std::reverse(rev.weights.begin(), rev.weights.end());
  std::reverse(rev.dvol.begin(), rev.dvol.end());
  std::vector<double> frev(field.rbegin(), field.rend());
  const double reversed = integrate(rev, frev);
  EXPECT_LT(std::abs(base - reversed), 1e-10 * std::max(1.0, std::abs(base)));
}

TEST(Immersion, MeshVolumeConvergesSuperlinearly) {
  // The perturbed torus volume element is not a finite trig polynomial, so
  // the periodic rule converges spectrally rather than being exact outright.
  auto patch = make_zoo_patch("fourier-perturbed-torus", {{"amplitude", 0.3}});
  const double exact = submanifold_volume(build_mesh(patch, {96, 96}));
  const double e1 = std::abs(submanifold_volume(build_mesh(patch, {8, 8})) - exact);
  const double e2 = std::abs(submanifold_volume(build_mesh(patch, {16, 16})) - exact);
  EXPECT_GT(e1, 0.0);
  EXPECT_LT(e2, e1 / 4.0);
}

TEST(Immersion, ResolutionBelowFourIsRejected) {
  EXPECT_THROW(build_mesh(make_zoo_patch("torus-of-revolution"), {3, 8}), PreconditionError);
}

TEST(Immersion, DeformAtZeroIsIdentity) {
  auto patch = make_zoo_patch("torus-of-revolution");
  auto nu = DeformationField::random_ambient_polynomial(patch, 11);
  auto same = deform(patch, nu, 0.0);
  Vec u(2);
  u << 0.7, 1.9;
  EXPECT_EQ((same.jet_at(u).value - patch.jet_at(u).value).norm(), 0.0);
}

TEST(Immersion, EuclideanConstantDeformationIsExact) {
  auto patch = make_zoo_patch("torus-of-revolution");
  Vec v(3);
  v << 0.3, -0.2, 0.5;
  auto nu = DeformationField::constant(v, 2);
  auto moved = deform(patch, nu, 0.25);
  Vec u(2);
  u << 2.0, 0.4;
  EXPECT_EQ((moved.jet_at(u).value - (patch.jet_at(u).value + 0.25 * v)).norm(), 0.0);
}

TEST(Immersion, RankLossUnderDeformationIsDetected) {
  // nu = -f collapses the immersion entirely at t = 1.
  auto patch = make_zoo_patch("flat-torus-r4");
  auto nu = DeformationField([patch](const Vec& u) {
    Jet2 j = patch.jet_at(u);
    j.value = -j.value;
    for (auto& d : j.d1) d = -d;
    for (auto& row : j.d2)
      for (auto& d : row) d = -d;
    return j;
  });
  auto collapsed = deform(patch, nu, 1.0);
  EXPECT_THROW(collapsed.jet_at(Vec::Constant(2, 0.3)), ImmersionDegeneracyError);
  EXPECT_NO_THROW(deform(patch, nu, 0.01).jet_at(Vec::Constant(2, 0.3)));
}

TEST(Immersion, DeformationFirstOrderConsistency) {
  auto patch = make_zoo_patch("fourier-perturbed-torus");
  auto nu = DeformationField::random_ambient_polynomial(patch, 17);
  const auto& nu_eff = effective_deformation(patch, nu);
  Vec u(2);
  u << 1.3, 4.1;
  const Vec base = patch.jet_at(u).value;
  for (double t : {1e-2, 1e-3}) {
    const Vec ft = deform(patch, nu, t).jet_at(u).value;
    EXPECT_LT((ft - base - t * nu_eff.value_at(u)).norm(), 10.0 * t * t);
  }
  // d f_t/dt at t=0 by central differences equals the effective field.
  const double h = 1e-5;
  const Vec fd =
      (deform(patch, nu, h).jet_at(u).value - deform(patch, nu, -h).jet_at(u).value) / (2.0 * h);
  EXPECT_LT((fd - nu_eff.value_at(u)).norm(), 1e-9);
}

TEST(Immersion, GaussBonnetOnEllipsoid) {
  // Total Gauss curvature of any closed surface in R^3 with sphere topology
  // is 4*pi. Computed here from the raw jets, independent of the frames
  // module: K = det(II)/det(I) with II against the cross-product normal.
  auto patch = make_zoo_patch("ellipsoid", {{"a", 1.0}, {"b", 1.3}, {"c", 0.8}});
  const auto mesh = build_mesh(patch, {24, 48});
  const double total = integrate_fn(mesh, [&](std::size_t, const Vec& u) {
    const Jet2 j = patch.jet_at(u);
    Eigen::Vector3d fu = j.d1[0], fv = j.d1[1];
    Eigen::Vector3d nrm = fu.cross(fv).normalized();
    const double L = nrm.dot(j.d2[0][0]);
    const double M = nrm.dot(j.d2[0][1]);
    const double N = nrm.dot(j.d2[1][1]);
    const double E = fu.dot(fu), F = fu.dot(fv), G = fv.dot(fv);
    return (L * N - M * M) / (E * G - F * F);
  });
  EXPECT_NEAR(total, 4.0 * kPi, 1e-4);
}
