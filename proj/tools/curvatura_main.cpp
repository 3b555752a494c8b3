// curvatura: numerical engine for higher-order mean curvatures of immersed
// submanifolds. Computes relative/intrinsic curvature invariants, Euler-
// Lagrange operators of the total 2p-th mean curvature functionals, tube
// volumes and austerity diagnostics over a built-in manifold zoo.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "curvatura/runner.hpp"

namespace {

using namespace curvatura;

std::vector<int> parse_p_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = config_detail::trim(item);
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

void apply_kv(const std::vector<std::string>& kvs, std::map<std::string, double>& target) {
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw PreconditionError("expected name=value, got: " + kv);
    target[config_detail::trim(kv.substr(0, eq))] = std::stod(kv.substr(eq + 1));
  }
}

void print_zoo_table() {
  std::printf("%-28s %2s %2s  %-18s %s\n", "name", "n", "m", "ambient", "reference values");
  for (const ZooEntry& e : zoo()) {
    std::string refs;
    for (const auto& [k, v] : e.reference) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%s=%.6g ", k.c_str(), v);
      refs += buf;
    }
    std::printf("%-28s %2d %2d  %-18s %s\n", e.name.c_str(), e.n, e.m, e.ambient.c_str(),
                refs.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvatura - higher-order mean curvature diagnostics"};
  app.footer(
      "commands: invariants el-check first-variation tube austere report-all list-zoo\n"
      "examples:\n"
      "  curvatura invariants --manifold clifford-torus --p 1\n"
      "  curvatura el-check --manifold quadric-cp3 --p 0,1,2\n"
      "  curvatura report-all --config configs/clifford.conf --out out/clifford");

  std::string command, manifold, config_file, out_path, format, p_csv;
  int resolution = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> param_kv, tol_kv;

  app.add_option("command", command,
                 "invariants | el-check | first-variation | tube | austere | report-all | "
                 "list-zoo")
      ->required();
  app.add_option("--manifold", manifold, "zoo manifold name (unique prefixes accepted)");
  app.add_option("--config", config_file, "config file with [run]/[manifold] tables");
  app.add_option("--p", p_csv, "comma-separated list of p values");
  app.add_option("--resolution", resolution, "uniform mesh resolution override");
  auto* seed_opt = app.add_option("--seed", seed, "seed for every random draw");
  app.add_option("--out", out_path, "report base path (writes .json and .csv)");
  app.add_option("--format", format, "json | csv per-point tables")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--param", param_kv, "manifold parameter override name=value");
  app.add_option("--tol-overrides", tol_kv, "tolerance override name=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      app.exit(e);
      return 0;
    }
    std::cerr << app.help() << "\n" << e.what() << "\n";
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) cfg = load_config_file(config_file);
    cfg.command = command;
    if (!manifold.empty()) cfg.manifold = manifold;
    if (!p_csv.empty()) cfg.p_list = parse_p_list(p_csv);
    if (resolution > 0) cfg.resolution = resolution;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (cfg.seed == 0) cfg.seed = 1;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format;
    apply_kv(param_kv, cfg.params);
    apply_kv(tol_kv, cfg.tolerances);

    if (cfg.command == "list-zoo") {
      print_zoo_table();
      return 0;
    }
    if (cfg.manifold.empty()) {
      std::cerr << app.help() << "\nmissing --manifold (or --config with [manifold])\n";
      return 2;
    }

    const RunResult result = run(cfg);
    if (result.exit_code == 2) {
      std::cerr << app.help() << "\n" << result.report.dump(2) << "\n";
      return 2;
    }
    const auto paths = write_report_files(cfg, result);
    std::cout << result.report.dump(2) << "\n";
    for (const std::string& p : paths) std::cerr << "wrote " << p << "\n";
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
