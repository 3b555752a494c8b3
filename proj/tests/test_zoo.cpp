#include "curvatura/zoo.hpp"

#include <gtest/gtest.h>

#include "curvatura/frames.hpp"

using namespace curvatura;

TEST(Zoo, EveryEntryConstructsAndMeshes) {
  for (const ZooEntry& e : zoo()) {
    ImmersionPatch patch = e.build(e.params);
    EXPECT_EQ(patch.intrinsic_dim(), e.n) << e.name;
    EXPECT_EQ(patch.codim(), e.m) << e.name;
    const auto mesh = build_mesh(patch, e.default_resolution);
    EXPECT_GT(mesh.size(), 0u) << e.name;
    for (double w : mesh.weights) EXPECT_GT(w, 0.0);
    for (double dv : mesh.dvol) EXPECT_GT(dv, 0.0);
  }
}

// Every entry must satisfy the frame-construction invariants out of the box.
TEST(Zoo, EveryEntryPassesFrameInvariants) {
  Rng rng(3);
  for (const ZooEntry& e : zoo()) {
    ImmersionPatch patch = e.build(e.params);
    for (int rep = 0; rep < 2; ++rep) {
      Vec u(patch.intrinsic_dim());
      for (int i = 0; i < patch.intrinsic_dim(); ++i) {
        const double lo = patch.lo()[i], hi = patch.hi()[i];
        const double pad = patch.periodic(i) ? 0.0 : 0.1 * (hi - lo);
        u[i] = rng.uniform(lo + pad, hi - pad);
      }
      const auto frame = adapted_frame_at(patch, u);
      EXPECT_LT(frame.gram_residual, 1e-10) << e.name;
      const auto sff = second_fundamental_form(patch, u, frame);
      for (int a = 0; a < sff.m; ++a)
        EXPECT_LT((sff.h[a] - sff.h[a].transpose()).norm(), 1e-9) << e.name;
    }
  }
}

TEST(Zoo, CatalogContents) {
  const ZooEntry* clifford = find_zoo_entry("clifford-torus-s3");
  ASSERT_NE(clifford, nullptr);
  EXPECT_EQ(clifford->n, 2);
  EXPECT_EQ(clifford->m, 1);
  EXPECT_EQ(clifford->ambient, "space-form c=1");
  EXPECT_NEAR(clifford->reference.at("Kf2"), -1.0, 0.0);

  const ZooEntry* quadric = find_zoo_entry("quadric-cp3");
  ASSERT_NE(quadric, nullptr);
  EXPECT_EQ(quadric->n, 4);
  EXPECT_EQ(quadric->m, 2);
  EXPECT_EQ(quadric->ambient, "fubini-study c=4");

  for (const char* required :
       {"sphere", "ellipsoid", "torus-of-revolution", "flat-torus-r4", "clifford-torus-s3",
        "fourier-perturbed-torus", "linear-cp1-cp2", "quadric-cp2", "quadric-cp3",
        "holomorphic-graph-c3"})
    EXPECT_NE(find_zoo_entry(required), nullptr) << required;
}

TEST(Zoo, PrefixAliasAndUnknownNames) {
  EXPECT_NE(find_zoo_entry("clifford-torus"), nullptr);  // unique prefix
  EXPECT_EQ(find_zoo_entry("no-such-thing"), nullptr);
  EXPECT_THROW(make_zoo_patch("no-such-thing"), PreconditionError);
}

TEST(Zoo, ParameterOverrides) {
  auto small = make_zoo_patch("sphere", {{"r", 0.5}});
  auto big = make_zoo_patch("sphere", {{"r", 3.0}});
  Vec u(2);
  u << 1.0, 1.0;
  EXPECT_NEAR(small.jet_at(u).value.norm(), 0.5, 1e-12);
  EXPECT_NEAR(big.jet_at(u).value.norm(), 3.0, 1e-12);
}

TEST(Zoo, SphereN3IsRoundInR4) {
  auto patch = make_zoo_patch("sphere", {{"n", 3.0}, {"r", 1.25}});
  EXPECT_EQ(patch.intrinsic_dim(), 3);
  EXPECT_EQ(patch.ambient().dim(), 4);
  Rng rng(4);
  Vec u(3);
  u << rng.uniform(0.3, kPi - 0.3), rng.uniform(0.3, kPi - 0.3), rng.uniform(0.0, 2.0 * kPi);
  EXPECT_NEAR(patch.jet_at(u).value.norm(), 1.25, 1e-12);
  // Volume of S^3(r) is 2 pi^2 r^3.
  const auto mesh = build_mesh(patch, {12, 12, 24});
  EXPECT_NEAR(submanifold_volume(mesh), 2.0 * kPi * kPi * std::pow(1.25, 3), 1e-3);
}
