// Acceptance suite: each criterion prints one PASS/FAIL line with the worst
// observed value against its bound. Exit status is nonzero when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "curvatura/runner.hpp"
#include "curvatura/tubes.hpp"
#include "curvatura/variational.hpp"
#include "curvatura/zoo.hpp"
#include "oracles.hpp"

using namespace curvatura;
using curvatura::testing::elementary_symmetric_minors;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void bound(const std::string& what, double value, double limit) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s=%.3g (limit %.0e)", what.c_str(), value, limit);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!(value < limit)) pass = false;
  }

  void require(const std::string& what, bool ok) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? " ok" : " FAILED");
    if (!ok) pass = false;
  }
};

SffTensor random_sff(int n, int m, Rng& rng, double scale = 1.0) {
  SffTensor sff;
  sff.n = n;
  sff.m = m;
  sff.h.assign(m, Mat::Zero(n, n));
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        sff.h[a](i, j) = scale * rng.normal();
        sff.h[a](j, i) = sff.h[a](i, j);
      }
  return sff;
}

// --------------------------------------------------------------------------
// 1. Hypersurface reduction pins the wedge normalization:
//    K^f_2p = sigma_2p / C(n,2p) to 1e-10 and the H-route analog to 1e-9.
// --------------------------------------------------------------------------
Check criterion1() {
  Check c;
  Rng rng(101);
  double worst_k = 0.0, worst_h = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 5;  // 2..6
    Mat shape;
    if (rep % 2) {
      shape = random_sff(n, 1, rng).h[0];
    } else {
      Vec kappa(n);
      for (int i = 0; i < n; ++i) kappa[i] = rng.uniform(-2.0, 2.0);
      shape = kappa.asDiagonal();
    }
    SffTensor sff;
    sff.n = n;
    sff.m = 1;
    sff.h = {shape};
    const auto omega = relative_curvature(sff);
    for (int p = 0; 2 * p <= n; ++p)
      worst_k = std::max(worst_k, std::abs(k2p_at(omega, p) -
                                           elementary_symmetric_minors(shape, 2 * p) /
                                               binomial(n, 2 * p)));
    for (int p = 0; 2 * p + 1 <= n; ++p)
      worst_h = std::max(worst_h, std::abs(h2p1_at(omega, sff, p)[0] -
                                           elementary_symmetric_minors(shape, 2 * p + 1) /
                                               binomial(n, 2 * p + 1)));
  }
  c.bound("max |K2p - sigma/binom|", worst_k, 1e-10);
  c.bound("max |H2p+1 - sigma/binom|", worst_h, 1e-9);
  return c;
}

// --------------------------------------------------------------------------
// 2. Route equivalence: Kronecker contraction vs exact normal-sphere moments
//    for K^f_2p and H^f_2p+1, 1e-8, n <= 5, m <= 3, all p.
// --------------------------------------------------------------------------
Check criterion2() {
  Check c;
  Rng rng(202);
  double worst_k = 0.0, worst_h = 0.0;
  for (int n = 2; n <= 5; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int rep = 0; rep < 3; ++rep) {
        const auto sff = random_sff(n, m, rng);
        const auto omega = relative_curvature(sff);
        for (int p = 0; 2 * p <= n; ++p) {
          const double a = k2p_at(omega, p);
          const double b = k2p_via_normal_integral(sff, p);
          worst_k = std::max(worst_k, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
        for (int p = 0; 2 * p + 1 <= n; ++p) {
          const Vec a = h2p1_at(omega, sff, p);
          const Vec b = h2p1_via_normal_integral(sff, p);
          worst_h = std::max(worst_h, (a - b).norm() / std::max(1.0, a.norm()));
        }
      }
  c.bound("K route gap", worst_k, 1e-8);
  c.bound("H route gap", worst_h, 1e-8);
  return c;
}

// --------------------------------------------------------------------------
// 3. Space-form relation between intrinsic and relative invariants,
//    K^M_2p = sum_k c^{p-k} C(p,k) K^f_2k (and the H analog in range),
//    plus the Clifford torus instance K^M_2 = 0, K^f_2 = -1.
// --------------------------------------------------------------------------
Check criterion3() {
  Check c;
  Rng rng(303);
  double worst = 0.0;
  for (double cc : {-1.0, 0.0, 1.0})
    for (int rep = 0; rep < 6; ++rep) {
      const int n = 2 + rep % 4;
      const int m = 1 + rep % 3;
      const auto sff = random_sff(n, m, rng);
      const auto omega = relative_curvature(sff);
      AmbientFrameCurvature rc;
      rc.n = n;
      rc.m = m;
      rc.tttt.assign(std::size_t(n) * n * n * n, 0.0);
      rc.tntn.assign(std::size_t(n) * m * n * m, 0.0);
      rc.tntt.assign(std::size_t(n) * m * n * n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              rc.tttt[((std::size_t(i) * n + j) * n + k) * n + l] =
                  cc * ((i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0));
      for (int p = 0; 2 * p <= n; ++p) {
        const auto intr = intrinsic_invariants(omega, rc, sff, p);
        double want_k = 0.0;
        for (int k = 0; k <= p; ++k)
          want_k += std::pow(cc, p - k) * binomial(p, k) * k2p_at(omega, k);
        worst = std::max(worst, std::abs(intr.k2p - want_k) / std::max(1.0, std::abs(want_k)));
        if (2 * p + 1 <= n) {
          Vec want_h = Vec::Zero(m);
          for (int k = 0; k <= p; ++k)
            want_h += std::pow(cc, p - k) * binomial(p, k) * h2p1_at(omega, sff, k);
          worst = std::max(worst, (intr.h2p1 - want_h).norm() / std::max(1.0, want_h.norm()));
        }
      }
    }
  c.bound("binomial relation residual", worst, 1e-9);

  auto patch = make_zoo_patch("clifford-torus-s3");
  double worst_kf = 0.0, worst_km = 0.0;
  for (const Vec& u : sample_points(patch, 4)) {
    const PointState st = point_state(patch, u);
    worst_kf = std::max(worst_kf, std::abs(k2p_at(st.omega, 1) - (-1.0)));
    worst_km = std::max(worst_km, std::abs(intrinsic_invariants(st.omega, st.rc, st.sff, 1).k2p));
  }
  c.bound("clifford |Kf2 + 1|", worst_kf, 1e-6);
  c.bound("clifford |KM2|", worst_km, 1e-6);
  return c;
}

// --------------------------------------------------------------------------
// 4. Space-form Euler-Lagrange consistency: the general W/Qtilde path equals
//    -(n-2p) H_2p+1 + 2cp H_2p-1 pointwise to 1e-6 on every space-form zoo
//    patch for every valid p.
// --------------------------------------------------------------------------
Check criterion4() {
  Check c;
  double worst = 0.0;
  std::string worst_name = "-";
  for (const char* name :
       {"sphere", "ellipsoid", "torus-of-revolution", "flat-torus-r4", "clifford-torus-s3",
        "product-torus-s3", "great-sphere-s3", "fourier-perturbed-torus", "closed-curve-r3",
        "holomorphic-graph-c3"}) {
    auto patch = make_zoo_patch(name);
    const int per_axis = patch.intrinsic_dim() >= 4 ? 2 : 3;
    for (const Vec& u : sample_points(patch, per_axis)) {
      for (int p = 0; 2 * p <= patch.intrinsic_dim(); ++p) {
        const double gap = (el_operator_at(patch, u, p) - el_spaceform_at(patch, u, p)).norm();
        if (gap > worst) {
          worst = gap;
          worst_name = name;
        }
      }
    }
  }
  // also the n=3 hypersurface
  {
    auto patch = make_zoo_patch("sphere", {{"n", 3.0}, {"r", 1.3}});
    for (const Vec& u : sample_points(patch, 2))
      for (int p = 0; 2 * p <= 3; ++p)
        worst = std::max(worst,
                         (el_operator_at(patch, u, p) - el_spaceform_at(patch, u, p)).norm());
  }
  c.bound("max |L_general - L_shortcut| (worst: " + worst_name + ")", worst, 1e-6);
  return c;
}

// --------------------------------------------------------------------------
// 5. First variational formula: finite-difference dM_2p/dt against the
//    integral of <L_2p, nu_eff> with 5 seeded fields per case.
// --------------------------------------------------------------------------
Check criterion5() {
  Check c;
  struct Case {
    std::string name;
    ImmersionPatch patch;
    int p;
    std::vector<int> res;
    double scale;
  };
  std::vector<Case> cases;
  cases.push_back({"p=0 torus-of-revolution", make_zoo_patch("torus-of-revolution"), 0, {24, 24},
                   0.25});
  cases.push_back({"p=1 ellipsoid (Gauss-Bonnet)", make_zoo_patch("ellipsoid"), 1, {16, 32},
                   0.25});
  cases.push_back({"p=1 product-torus-s3", make_zoo_patch("product-torus-s3"), 1, {24, 24},
                   0.2});
  cases.push_back({"p=1 sphere3 in R4 (Reilly)",
                   make_zoo_patch("sphere", {{"n", 3.0}, {"r", 1.3}}), 1, {10, 10, 20}, 0.2});
  for (const Case& cs : cases) {
    double worst = 0.0;
    bool absolute = false;
    for (int k = 0; k < 5; ++k) {
      const auto nu =
          DeformationField::random_ambient_polynomial(cs.patch, 500 + 31 * k, cs.scale);
      const auto fv = first_variation_check(cs.patch, nu, cs.p, cs.res);
      if (std::max(std::abs(fv.lhs), std::abs(fv.rhs)) < 1e-5) {
        absolute = true;
        worst = std::max(worst, fv.abs_gap);
      } else {
        worst = std::max(worst, fv.rel_gap);
      }
    }
    c.bound(cs.name + (absolute ? " abs gap" : " rel gap"), worst, absolute ? 1e-6 : 1e-3);
  }
  return c;
}

// --------------------------------------------------------------------------
// 6. Complex submanifolds of CP^{n+m}: curvature identity, both lemmas,
//    H^f odd and L_2p all below 1e-5 at every mesh node; the non-complex
//    control breaks the sff identity by more than 1e-2.
// --------------------------------------------------------------------------
Check criterion6() {
  Check c;
  struct Entry {
    const char* name;
    std::vector<int> res;
  };
  for (const Entry e : std::vector<Entry>{{"linear-cp1-cp2", {6, 6}},
                                          {"quadric-cp2", {6, 6}},
                                          {"quadric-cp3", {4, 4, 4, 4}}}) {
    auto patch = make_zoo_patch(e.name);
    const auto mesh = build_mesh(patch, e.res);
    const auto rep =
        cpn_checks(patch, mesh.nodes, patch.intrinsic_dim() / 2, 606, 1e-5);
    const double worst =
        std::max({rep.mixed_curvature_residual, rep.sff_pairing_residual, rep.j_alternation_residual,
                  rep.w_identity_residual});
    double hmax = 0.0, lmax = 0.0;
    for (double v : rep.h_norms) hmax = std::max(hmax, v);
    for (double v : rep.l_norms) lmax = std::max(lmax, v);
    c.bound(std::string(e.name) + " identities", worst, 1e-5);
    c.bound(std::string(e.name) + " max |H|", hmax, 1e-5);
    c.bound(std::string(e.name) + " max |L|", lmax, 1e-5);
  }
  auto control = make_zoo_patch("nonholomorphic-cp2-control");
  const auto rep = cpn_checks(control, sample_points(control, 3), 1, 606, 1e-5);
  c.require("negative control breaks the sff identity (> 1e-2)",
            rep.sff_pairing_residual > 1e-2);
  return c;
}

// --------------------------------------------------------------------------
// 7. Weyl-Gray tube formula against the independent numeric tube oracle.
// --------------------------------------------------------------------------
Check criterion7() {
  Check c;
  {
    auto mesh = build_mesh(make_zoo_patch("closed-curve-r3"), {256});
    const double length = submanifold_volume(mesh);
    const auto totals = total_invariants(mesh);
    double worst = 0.0;
    for (double r : {0.05, 0.1, 0.18}) {
      const double formula = weyl_gray_volume(totals, 1, 2, 0.0, r);
      worst = std::max({worst,
                        std::abs(formula - 2.0 * kPi * length * r) / (2.0 * kPi * length * r),
                        std::abs(tube_volume_numeric(mesh, r) - formula) / formula});
    }
    c.bound("curve-in-R3 V=2*pi*L*r", worst, 1e-3);
  }
  {
    const double R = 2.0;
    auto mesh = build_mesh(make_zoo_patch("sphere", {{"r", R}}), {24, 48});
    const auto totals = total_invariants(mesh);
    double worst = 0.0;
    for (double r : {0.4, 1.0, 1.5}) {
      const double expect = 8.0 * kPi * (R * R + r * r);
      worst = std::max({worst, std::abs(weyl_gray_volume(totals, 2, 1, 0.0, r) - expect) / expect,
                        std::abs(tube_volume_numeric(mesh, r) - expect) / expect});
    }
    c.bound("sphere V=8*pi*(R^2+r^2)", worst, 1e-3);
  }
  {
    auto mesh = build_mesh(make_zoo_patch("torus-of-revolution"), {48, 48});
    const double area = submanifold_volume(mesh);
    const auto totals = total_invariants(mesh);
    double worst = 0.0;
    for (double r : {0.2, 0.5, 0.9})
      worst = std::max({worst,
                        std::abs(weyl_gray_volume(totals, 2, 1, 0.0, r) - 2.0 * area) /
                            (2.0 * area),
                        std::abs(tube_volume_numeric(mesh, r) - 2.0 * area) / (2.0 * area)});
    c.bound("torus V constant in r", worst, 1e-3);
  }
  {
    auto mesh =
        build_mesh(make_zoo_patch("fourier-perturbed-torus", {{"amplitude", 0.15}}), {32, 32});
    const auto rep = tube_report(mesh);
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
      worst = std::max(worst,
                       std::abs(rep.v_numeric[i] - rep.v_formula[i]) / std::abs(rep.v_formula[i]));
    c.bound("perturbed torus in R4 cross-oracle", worst, 1e-3);
  }
  return c;
}

// --------------------------------------------------------------------------
// 8. Austerity and tubular minimality: austere examples satisfy all four
//    equivalent conditions and the sign consequences; round spheres fail
//    everything unanimously.
// --------------------------------------------------------------------------
Check criterion8() {
  Check c;
  {
    auto mesh = build_mesh(make_zoo_patch("clifford-torus-s3"), {32, 32});
    const auto au = austerity_check(mesh);
    const auto tm = tubular_minimality_report(mesh);
    c.require("clifford austere", au.austere);
    c.require("clifford unanimous tubular-minimal",
              tm.unanimous && tm.tubular_minimal);
    c.bound("clifford max condition residual",
            std::max({tm.h_f_max, tm.h_m_max, tm.l_max}), 1e-5);
    double sign_worst = 0.0;
    for (double v : au.signed_k2p_min) sign_worst = std::min(sign_worst, v);
    c.require("clifford (-1)^p K2p >= -1e-8", sign_worst > -1e-8);
  }
  {
    auto mesh = build_mesh(make_zoo_patch("holomorphic-graph-c3"), {8, 8, 8, 8});
    const auto au = austerity_check(mesh, 64);
    const auto tm = tubular_minimality_report(mesh);
    c.require("holomorphic-graph austere", au.austere);
    c.require("holomorphic-graph unanimous tubular-minimal",
              tm.unanimous && tm.tubular_minimal);
    double sign_worst = 0.0;
    for (double v : au.signed_k2p_min) sign_worst = std::min(sign_worst, v);
    c.require("holomorphic-graph (-1)^p K2p >= -1e-8", sign_worst > -1e-8);
    double hodd = 0.0;
    for (double v : au.h_odd_norm_max) hodd = std::max(hodd, v);
    c.bound("holomorphic-graph H_odd", hodd, 1e-6);
  }
  {
    auto mesh = build_mesh(make_zoo_patch("sphere", {{"r", 1.5}}), {16, 32});
    const auto au = austerity_check(mesh);
    const auto tm = tubular_minimality_report(mesh);
    c.require("round sphere non-austere", !au.austere);
    c.require("round sphere unanimous negative",
              tm.unanimous && !tm.flag_tube && !tm.flag_el && !tm.flag_hf && !tm.flag_hm);
  }
  return c;
}

// --------------------------------------------------------------------------
// 9. Determinism: identical config and seed must produce byte-identical
//    report files regardless of the worker count.
// --------------------------------------------------------------------------
Check criterion9() {
  Check c;
  RunConfig cfg;
  cfg.command = "report-all";
  cfg.manifold = "clifford-torus-s3";
  cfg.resolution = 12;
  cfg.seed = 3;
  cfg.format = "csv";

  auto run_with_workers = [&](const char* workers, const std::string& out) {
    setenv("CURVATURA_WORKERS", workers, 1);
    RunConfig local = cfg;
    local.out_path = out;
    const auto result = run(local);
    write_report_files(local, result);
    unsetenv("CURVATURA_WORKERS");
    return result.exit_code;
  };
  const std::string base = "acceptance_determinism";
  run_with_workers("1", base + "_w1");
  run_with_workers("4", base + "_w4");
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* ext : {".json", ".csv"}) {
    const std::string a = slurp(base + "_w1" + ext);
    const std::string b = slurp(base + "_w4" + ext);
    c.require(std::string("bytes identical (") + ext + ", " + std::to_string(a.size()) +
                  " bytes)",
              !a.empty() && a == b);
    std::remove((base + "_w1" + ext).c_str());
    std::remove((base + "_w4" + ext).c_str());
  }
  // repeated run with the same worker count is also identical
  run_with_workers("2", base + "_a");
  run_with_workers("2", base + "_b");
  c.require("repeated run identical",
            slurp(base + "_a.json") == slurp(base + "_b.json"));
  for (const char* suffix : {"_a.json", "_a.csv", "_b.json", "_b.csv"})
    std::remove((base + suffix).c_str());
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"hypersurface reduction pins conventions", criterion1},
      {"route equivalence (contraction vs normal-sphere moments)", criterion2},
      {"space-form relation between intrinsic and relative invariants", criterion3},
      {"space-form Euler-Lagrange consistency (general vs shortcut)", criterion4},
      {"first variational formula", criterion5},
      {"complex submanifolds of CP^{n+m}", criterion6},
      {"tube formula vs numeric tube oracle", criterion7},
      {"austerity and tubular minimality", criterion8},
      {"deterministic reports across worker counts", criterion9},
  };

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = criteria[i].fn();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %zu: %s [%.1fs] %s\n", result.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, secs, result.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && result.pass;
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: at least one criterion failed");
  return all_pass ? 0 : 1;
}
