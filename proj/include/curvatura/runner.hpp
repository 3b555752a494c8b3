#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvatura/tubes.hpp"
#include "curvatura/variational.hpp"
#include "curvatura/zoo.hpp"

namespace curvatura {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string command;   // invariants | el-check | first-variation | tube |
                         // austere | report-all | list-zoo
  std::string manifold;
  ZooParams params;
  std::vector<int> p_list;          // empty = all valid p
  int resolution = 0;               // 0 = zoo default, else uniform override
  std::uint64_t seed = 1;
  std::string out_path;             // base path; empty = stdout only
  std::string format = "json";     // json | csv per-point tables
  std::map<std::string, double> tolerances;
};

inline std::map<std::string, double> default_tolerances() {
  return {
      {"invariants.reference", 1e-6}, {"el.spaceform", 1e-6},
      {"el.cp", 1e-5},                {"first-variation.rel", 1e-3},
      {"first-variation.abs", 1e-6},  {"tube.rel", 1e-3},
      {"austere.pairing", 1e-6},      {"minimality", 1e-5},
      {"minimality.tube", 1e-5},
  };
}

inline double tol(const RunConfig& cfg, const std::string& key) {
  auto it = cfg.tolerances.find(key);
  if (it != cfg.tolerances.end()) return it->second;
  return default_tolerances().at(key);
}

// ---------------------------------------------------------------------------
// Config file: a small key-value format with nested [tables], doubles,
// strings, booleans and number arrays.
//
//   [run]
//   command = "invariants"
//   p = [0, 1]
//   [manifold]
//   name = "clifford-torus-s3"
//   [manifold.params]
//   a = 0.7071
// ---------------------------------------------------------------------------

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct ConfigValue {
  std::string raw;

  double number() const { return std::stod(raw); }
  std::string string() const {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
      return raw.substr(1, raw.size() - 2);
    return raw;
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    std::string body = raw;
    if (!body.empty() && body.front() == '[') body = body.substr(1, body.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
  }
};

using ConfigTable = std::map<std::string, ConfigValue>;

inline std::map<std::string, ConfigTable> parse_config(std::istream& in) {
  std::map<std::string, ConfigTable> tables;
  std::string section, line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw PreconditionError("config: malformed table header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw PreconditionError("config: expected key = value: " + line);
    std::string key = trim(line.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"')
      key = key.substr(1, key.size() - 2);
    tables[section][key] = ConfigValue{trim(line.substr(eq + 1))};
  }
  return tables;
}

}  // namespace config_detail

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("config: cannot open " + path);
  const auto tables = config_detail::parse_config(in);
  RunConfig cfg;
  if (auto it = tables.find("run"); it != tables.end()) {
    const auto& t = it->second;
    if (t.count("command")) cfg.command = t.at("command").string();
    if (t.count("p"))
      for (double v : t.at("p").numbers()) cfg.p_list.push_back(static_cast<int>(v));
    if (t.count("resolution")) cfg.resolution = static_cast<int>(t.at("resolution").number());
    if (t.count("seed")) cfg.seed = static_cast<std::uint64_t>(t.at("seed").number());
    if (t.count("out")) cfg.out_path = t.at("out").string();
    if (t.count("format")) cfg.format = t.at("format").string();
  }
  if (auto it = tables.find("manifold"); it != tables.end())
    if (it->second.count("name")) cfg.manifold = it->second.at("name").string();
  if (auto it = tables.find("manifold.params"); it != tables.end())
    for (const auto& [k, v] : it->second) cfg.params[k] = v.number();
  if (auto it = tables.find("tolerances"); it != tables.end())
    for (const auto& [k, v] : it->second) cfg.tolerances[k] = v.number();
  return cfg;
}

// ---------------------------------------------------------------------------
// Report plumbing
// ---------------------------------------------------------------------------

struct Verdict {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct RunResult {
  int exit_code = 0;
  Json report;
  std::string csv;  // per-point table, empty when not produced
};

namespace runner_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline Json verdicts_json(const std::vector<Verdict>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs)
    arr.push_back(Json{{"check", v.name}, {"value", v.value}, {"bound", v.bound},
                       {"pass", v.pass}});
  return arr;
}

inline bool all_pass(const std::vector<Verdict>& vs) {
  for (const auto& v : vs)
    if (!v.pass) return false;
  return true;
}

inline std::vector<int> valid_p_list(const RunConfig& cfg, int n) {
  std::vector<int> ps = cfg.p_list;
  if (ps.empty())
    for (int p = 0; 2 * p <= n; ++p) ps.push_back(p);
  for (int p : ps)
    if (p < 0 || 2 * p > n)
      throw PreconditionError("p out of range [0, n/2]: p = " + std::to_string(p));
  return ps;
}

inline std::vector<int> mesh_resolution(const RunConfig& cfg, const ZooEntry& entry) {
  if (cfg.resolution == 0) return entry.default_resolution;
  return std::vector<int>(entry.n, cfg.resolution);
}

}  // namespace runner_detail

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace runner_detail {

inline void run_invariants(const RunConfig& cfg, const ZooEntry& entry,
                           const SubmanifoldMesh& mesh, const std::vector<int>& ps, Json& rep,
                           std::vector<Verdict>& verdicts, std::string& csv) {
  const int n = mesh.patch.intrinsic_dim();
  struct Row {
    std::vector<double> k2p, hnorm, km2p, hmnorm;
  };
  std::vector<Row> rows(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t k) {
    const PointState st = point_state(mesh.patch, mesh.nodes[k]);
    for (int p : ps) {
      rows[k].k2p.push_back(k2p_at(st.omega, p));
      rows[k].hnorm.push_back(h2p1_at(st.omega, st.sff, p).norm());
      const auto intr = intrinsic_invariants(st.omega, st.rc, st.sff, p);
      rows[k].km2p.push_back(intr.k2p);
      rows[k].hmnorm.push_back(intr.h2p1.norm());
    }
  });

  Json totals = Json::object();
  Json ranges = Json::object();
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    const int p = ps[pi];
    std::vector<double> field(mesh.size());
    for (std::size_t k = 0; k < mesh.size(); ++k) field[k] = rows[k].k2p[pi];
    totals["M_" + std::to_string(2 * p)] = integrate(mesh, field);
    double kmin = field[0], kmax = field[0];
    for (double v : field) {
      kmin = std::min(kmin, v);
      kmax = std::max(kmax, v);
    }
    ranges["Kf_" + std::to_string(2 * p)] = Json{{"min", kmin}, {"max", kmax}};
  }
  rep["totals"] = totals;
  rep["pointwise_ranges"] = ranges;
  rep["volume"] = submanifold_volume(mesh);

  // Reference-value verdicts where the catalog pins closed forms.
  const double rtol = tol(cfg, "invariants.reference");
  auto pos = [&](int p) {
    for (std::size_t pi = 0; pi < ps.size(); ++pi)
      if (ps[pi] == p) return static_cast<int>(pi);
    return -1;
  };
  for (const auto& [key, target] : entry.reference) {
    if (key == "Kf2" && pos(1) >= 0) {
      double worst = 0.0;
      for (const Row& r : rows) worst = std::max(worst, std::abs(r.k2p[pos(1)] - target));
      verdicts.push_back({"Kf2 == " + fmt(target), worst, rtol, worst < rtol});
    } else if (key == "KM2" && pos(1) >= 0) {
      double worst = 0.0;
      for (const Row& r : rows) worst = std::max(worst, std::abs(r.km2p[pos(1)] - target));
      verdicts.push_back({"KM2 == " + fmt(target), worst, rtol, worst < rtol});
    } else if (key == "area") {
      const double vol = rep["volume"].get<double>();
      const double err = std::abs(vol - target) / std::max(1.0, std::abs(target));
      verdicts.push_back({"area == " + fmt(target), err, rtol, err < rtol});
    } else if (key == "h_norm" && pos(0) >= 0) {
      double worst = 0.0;
      for (const Row& r : rows) worst = std::max(worst, r.hnorm[pos(0)]);
      verdicts.push_back({"|H1| == 0", worst, rtol, worst < rtol});
    }
  }

  if (cfg.format == "csv") {
    std::string s = "node";
    for (int i = 0; i < n; ++i) s += ",u" + std::to_string(i);
    for (int p : ps)
      s += ",Kf_" + std::to_string(2 * p) + ",Hf_" + std::to_string(2 * p + 1) + "_norm" +
           ",KM_" + std::to_string(2 * p) + ",HM_" + std::to_string(2 * p + 1) + "_norm";
    s += "\n";
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      s += std::to_string(k);
      for (int i = 0; i < n; ++i) s += "," + fmt(mesh.nodes[k][i]);
      for (std::size_t pi = 0; pi < ps.size(); ++pi)
        s += "," + fmt(rows[k].k2p[pi]) + "," + fmt(rows[k].hnorm[pi]) + "," +
             fmt(rows[k].km2p[pi]) + "," + fmt(rows[k].hmnorm[pi]);
      s += "\n";
    }
    csv = s;
  }
}

inline void run_el_check(const RunConfig& cfg, const SubmanifoldMesh& mesh,
                         const std::vector<int>& ps, Json& rep,
                         std::vector<Verdict>& verdicts) {
  const AmbientKind kind = mesh.patch.ambient().kind();
  const bool spaceform = kind != AmbientKind::FubiniStudy;
  Json per_p = Json::object();
  for (int p : ps) {
    std::vector<double> lnorm(mesh.size()), gap(mesh.size(), 0.0);
    parallel_for(mesh.size(), [&](std::size_t k) {
      const Vec general = el_operator_at(mesh.patch, mesh.nodes[k], p);
      lnorm[k] = general.norm();
      if (spaceform) gap[k] = (general - el_spaceform_at(mesh.patch, mesh.nodes[k], p)).norm();
    });
    double lmax = 0.0, gmax = 0.0;
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      lmax = std::max(lmax, lnorm[k]);
      gmax = std::max(gmax, gap[k]);
    }
    Json entry{{"max_L_norm", lmax}};
    if (spaceform) entry["max_shortcut_gap"] = gmax;
    per_p["p" + std::to_string(p)] = entry;
    if (spaceform)
      verdicts.push_back({"L_" + std::to_string(2 * p) + " general == shortcut", gmax,
                          tol(cfg, "el.spaceform"), gmax < tol(cfg, "el.spaceform")});
    else if (mesh.patch.claims_complex())
      verdicts.push_back({"L_" + std::to_string(2 * p) + " == 0 (complex submanifold)", lmax,
                          tol(cfg, "el.cp"), lmax < tol(cfg, "el.cp")});
  }
  rep["el"] = per_p;
  if (mesh.patch.claims_complex() && mesh.patch.ambient().is_complex()) {
    const auto samples = sample_points(mesh.patch, 2);
    int pmax = 0;
    for (int p : ps) pmax = std::max(pmax, p);
    const auto cp = cpn_checks(mesh.patch, samples, pmax, cfg.seed, tol(cfg, "el.cp"));
    rep["cp_checks"] = Json{{"mixed_curvature_residual", cp.mixed_curvature_residual},
                            {"sff_pairing_residual", cp.sff_pairing_residual},
                            {"j_alternation_residual", cp.j_alternation_residual},
                            {"w_identity_residual", cp.w_identity_residual},
                            {"holomorphy_defect", cp.holomorphy_defect}};
    verdicts.push_back({"complex-submanifold identities", std::max({cp.mixed_curvature_residual,
                         cp.sff_pairing_residual, cp.j_alternation_residual, cp.w_identity_residual}),
                        tol(cfg, "el.cp"), cp.pass});
  }
}

inline void run_first_variation(const RunConfig& cfg, const ZooEntry& entry,
                                const SubmanifoldMesh& mesh, const std::vector<int>& ps,
                                Json& rep, std::vector<Verdict>& verdicts) {
  if (!entry.closed)
    throw PreconditionError("first-variation requires a closed manifold; " + entry.name +
                            " is an open patch");
  Json out = Json::array();
  for (int p : ps) {
    for (int k = 0; k < 5; ++k) {
      const auto nu = DeformationField::random_ambient_polynomial(
          mesh.patch, cfg.seed * 1000 + 97 * p + k, 0.25);
      const auto fv = first_variation_check(mesh.patch, nu, p, mesh.resolution);
      out.push_back(Json{{"p", p}, {"field", k}, {"lhs", fv.lhs}, {"rhs", fv.rhs},
                         {"abs_gap", fv.abs_gap}, {"rel_gap", fv.rel_gap}});
      const bool tiny = std::max(std::abs(fv.lhs), std::abs(fv.rhs)) < 10.0 * tol(cfg, "first-variation.abs");
      const bool pass = tiny ? fv.abs_gap < tol(cfg, "first-variation.abs")
                             : fv.rel_gap < tol(cfg, "first-variation.rel");
      verdicts.push_back({"dM_" + std::to_string(2 * p) + "/dt == <L,nu> (field " +
                              std::to_string(k) + ")",
                          tiny ? fv.abs_gap : fv.rel_gap,
                          tiny ? tol(cfg, "first-variation.abs") : tol(cfg, "first-variation.rel"),
                          pass});
    }
  }
  rep["first_variation"] = out;
}

inline void run_tube(const RunConfig& cfg, const SubmanifoldMesh& mesh, Json& rep,
                     std::vector<Verdict>& verdicts) {
  const auto tr = tube_report(mesh);
  Json radii = Json::array();
  for (std::size_t i = 0; i < tr.radii.size(); ++i) {
    Json row{{"r", tr.radii[i]}, {"v_formula", tr.v_formula[i]}};
    row["contributions"] = tr.contributions[i];
    if (i < tr.v_numeric.size()) {
      row["v_numeric"] = tr.v_numeric[i];
      const double gap = std::abs(tr.v_numeric[i] - tr.v_formula[i]) /
                         std::max(1e-300, std::abs(tr.v_formula[i]));
      row["rel_gap"] = gap;
      verdicts.push_back({"tube volume formula == numeric at r=" + fmt(tr.radii[i]), gap,
                          tol(cfg, "tube.rel"), gap < tol(cfg, "tube.rel")});
    }
    radii.push_back(row);
  }
  Json totals = Json::array();
  for (double t : tr.totals) totals.push_back(t);
  rep["tube"] = Json{{"max_radius", tr.max_radius},
                     {"totals", totals},
                     {"sphere_constants", tr.sphere_constants},
                     {"radii", radii}};
}

inline void run_austere(const RunConfig& cfg, const SubmanifoldMesh& mesh, Json& rep,
                        std::vector<Verdict>& verdicts) {
  const auto au = austerity_check(mesh, 32, cfg.seed, tol(cfg, "austere.pairing"));
  Json a{{"austere", au.austere},
         {"pairing_residual", au.pairing_residual},
         {"xi_samples", au.xi_samples}};
  Json signedk = Json::array(), hodd = Json::array();
  for (double v : au.signed_k2p_min) signedk.push_back(v);
  for (double v : au.h_odd_norm_max) hodd.push_back(v);
  a["signed_k2p_min"] = signedk;
  a["h_odd_norm_max"] = hodd;
  rep["austerity"] = a;
  if (au.austere) {
    // Austerity forces alternating-sign even invariants and vanishing odd ones.
    double worst_sign = 0.0;
    for (double v : au.signed_k2p_min) worst_sign = std::min(worst_sign, v);
    verdicts.push_back({"austere => (-1)^p K_2p >= 0", -worst_sign, 1e-8, worst_sign > -1e-8});
    double worst_h = 0.0;
    for (double v : au.h_odd_norm_max) worst_h = std::max(worst_h, v);
    verdicts.push_back({"austere => H_odd == 0", worst_h, 1e-6, worst_h < 1e-6});
  }

  const AmbientKind kind = mesh.patch.ambient().kind();
  if (kind == AmbientKind::Euclidean || kind == AmbientKind::SpaceForm) {
    const auto tm = tubular_minimality_report(mesh, cfg.seed, tol(cfg, "minimality"),
                                              tol(cfg, "minimality.tube"));
    Json t{{"tubular_minimal", tm.tubular_minimal},
           {"flag_tube", tm.flag_tube},
           {"flag_el", tm.flag_el},
           {"flag_hf", tm.flag_hf},
           {"flag_hm", tm.flag_hm},
           {"h_f_max", tm.h_f_max},
           {"h_m_max", tm.h_m_max},
           {"l_max", tm.l_max}};
    Json dv = Json::array();
    for (double v : tm.tube_derivative) dv.push_back(v);
    t["tube_derivative"] = dv;
    rep["tubular_minimality"] = t;
    verdicts.push_back({"tubular-minimality flags unanimous", tm.unanimous ? 0.0 : 1.0, 0.5, tm.unanimous});
    if (au.austere)
      verdicts.push_back({"austere => tubular minimal", tm.tubular_minimal ? 0.0 : 1.0, 0.5,
                          tm.tubular_minimal});
  }
}

}  // namespace runner_detail

inline Json zoo_table_json() {
  Json arr = Json::array();
  for (const ZooEntry& e : zoo()) {
    Json refs = Json::object();
    for (const auto& [k, v] : e.reference) refs[k] = v;
    Json params = Json::object();
    for (const auto& [k, v] : e.params) params[k] = v;
    arr.push_back(Json{{"name", e.name}, {"n", e.n}, {"m", e.m}, {"ambient", e.ambient},
                       {"params", params}, {"reference", refs}});
  }
  return arr;
}

inline RunResult run(const RunConfig& cfg) {
  RunResult result;
  Json rep = Json::object();

  if (cfg.command == "list-zoo") {
    rep["zoo"] = zoo_table_json();
    result.report = rep;
    return result;
  }

  const ZooEntry* entry = find_zoo_entry(cfg.manifold);
  if (!entry) {
    result.exit_code = 2;
    result.report = Json{{"error", "unknown manifold: " + cfg.manifold}};
    return result;
  }
  static const std::vector<std::string> kCommands = {
      "invariants", "el-check", "first-variation", "tube", "austere", "report-all"};
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
    result.exit_code = 2;
    result.report = Json{{"error", "unknown command: " + cfg.command}};
    return result;
  }

  try {
    ZooParams params = entry->params;
    for (const auto& [k, v] : cfg.params) params[k] = v;
    ImmersionPatch patch = entry->build(params);
    const auto resolution = runner_detail::mesh_resolution(cfg, *entry);
    const SubmanifoldMesh mesh = build_mesh(patch, resolution);
    const auto ps = runner_detail::valid_p_list(cfg, patch.intrinsic_dim());

    rep["config"] = Json{{"command", cfg.command},
                         {"manifold", entry->name},
                         {"resolution", resolution},
                         {"p", ps},
                         {"seed", cfg.seed},
                         {"format", cfg.format}};
    Json tols = Json::object();
    for (const auto& [k, v] : default_tolerances()) tols[k] = tol(cfg, k);
    rep["config"]["tolerances"] = tols;
    const StencilOptions stencil;
    const FirstVariationOptions fv;
    rep["config"]["steps"] = Json{{"ambient_fd_step", patch.ambient().fd_step()},
                                  {"stencil_step_fraction", stencil.step_fraction},
                                  {"stencil_boundary_shrink", stencil.boundary_shrink},
                                  {"variation_t_step", fv.t_step},
                                  {"t_difference_order", 4}};
    Json parm = Json::object();
    for (const auto& [k, v] : params) parm[k] = v;
    rep["config"]["params"] = parm;

    std::vector<Verdict> verdicts;
    const bool all = cfg.command == "report-all";
    if (all || cfg.command == "invariants")
      runner_detail::run_invariants(cfg, *entry, mesh, ps, rep, verdicts, result.csv);
    if (all || cfg.command == "el-check")
      runner_detail::run_el_check(cfg, mesh, ps, rep, verdicts);
    if (cfg.command == "first-variation")
      runner_detail::run_first_variation(cfg, *entry, mesh, ps, rep, verdicts);
    if (all || cfg.command == "tube") runner_detail::run_tube(cfg, mesh, rep, verdicts);
    if (all || cfg.command == "austere") runner_detail::run_austere(cfg, mesh, rep, verdicts);

    rep["verdicts"] = runner_detail::verdicts_json(verdicts);
    rep["pass"] = runner_detail::all_pass(verdicts);
    result.exit_code = runner_detail::all_pass(verdicts) ? 0 : 1;
  } catch (const Error& e) {
    result.exit_code = 1;
    rep["error"] = e.what();
  }
  result.report = rep;
  return result;
}

// Writes <out>.json (and <out>.csv when produced). Returns the paths used.
inline std::vector<std::string> write_report_files(const RunConfig& cfg, const RunResult& result) {
  std::vector<std::string> paths;
  if (cfg.out_path.empty()) return paths;
  const auto parent = std::filesystem::path(cfg.out_path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  {
    const std::string path = cfg.out_path + ".json";
    std::ofstream out(path);
    out << result.report.dump(2) << "\n";
    paths.push_back(path);
  }
  if (!result.csv.empty()) {
    const std::string path = cfg.out_path + ".csv";
    std::ofstream out(path);
    out << result.csv;
    paths.push_back(path);
  }
  return paths;
}

}  // namespace curvatura
