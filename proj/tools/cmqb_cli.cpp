// cmqb: configuration-driven scenario runner for the coupled
// multi-qubit-boson vibronic simulator.
//
// Subcommands: integrals, map, simulate, tomography, bo, compare, weyl.
// Global flags: --config <json>, --out <dir>, --seed <n>. All CSV outputs
// carry a header row and a "# units: a.u." comment line.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cmqb/cmqb.hpp"

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

cmqb::ScenarioConfig load_config(const GlobalOpts& g) {
  cmqb::ScenarioConfig c;
  if (!g.config_path.empty())
    c = cmqb::config_from_json(
        nlohmann::json::parse(cmqb::read_file(g.config_path)));
  if (!g.out_dir.empty()) c.out_dir = g.out_dir;
  if (g.seed_set) c.seed = g.seed;
  return c;
}

void add_global_flags(CLI::App* app, GlobalOpts& g) {
  app->add_option("--config", g.config_path, "scenario config JSON file");
  app->add_option("--out", g.out_dir, "output directory");
  app->add_option("--seed", g.seed, "RNG seed for shot sampling")
      ->each([&](const std::string&) { g.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled multi-qubit-boson vibronic dynamics simulator"};
  app.require_subcommand(1);
  GlobalOpts g;

  // integrals: electronic-structure tables + Taylor fits only
  auto* cmd_integrals = app.add_subcommand(
      "integrals", "compute diabatic integral tables and Taylor fits");
  add_global_flags(cmd_integrals, g);

  // map: integrals + Jordan-Wigner mapping artifacts
  auto* cmd_map = app.add_subcommand(
      "map", "map the model onto the qubit-boson Hamiltonian");
  add_global_flags(cmd_map, g);

  // simulate: full pipeline with the configured (or overridden) method
  auto* cmd_sim = app.add_subcommand("simulate", "run scenario dynamics");
  add_global_flags(cmd_sim, g);
  std::string method;
  double dt = -1, t_final = -1;
  cmd_sim->add_option("--method", method,
                      "exact | trotter | bo-full | bo-gboa");
  cmd_sim->add_option("--dt", dt, "Trotter step (a.u.)");
  cmd_sim->add_option("--t", t_final, "final time (a.u.)");
  std::string states;
  cmd_sim->add_option("--states", states,
                      "comma-separated GBOA subset, e.g. 2,3");

  // tomography: measurement-layer artifacts for the configured snapshots
  auto* cmd_tomo = app.add_subcommand(
      "tomography", "characteristic-function tomography of the exact state");
  add_global_flags(cmd_tomo, g);
  int kpoints = -1;
  double kspacing = -1;
  long shots = -1;
  cmd_tomo->add_option("--kpoints", kpoints, "momentum grid points");
  cmd_tomo->add_option("--kspacing", kspacing, "momentum grid spacing (a.u.)");
  cmd_tomo->add_option("--shots", shots,
                       "Hadamard-test shots per sample (0 = exact)");

  // bo: Born-Oppenheimer reference pipeline
  auto* cmd_bo = app.add_subcommand(
      "bo", "Born-Huang reference dynamics (full or GBOA subset)");
  add_global_flags(cmd_bo, g);
  std::string bo_states;
  bool bo_full = false;
  cmd_bo->add_option("--states", bo_states,
                     "comma-separated GBOA subset, e.g. 2,3");
  cmd_bo->add_flag("--full", bo_full, "use all three BO states");

  // compare: metric table between two finished runs
  auto* cmd_cmp = app.add_subcommand("compare", "compare two run directories");
  add_global_flags(cmd_cmp, g);
  std::string dir_a, dir_b, metric = "all";
  cmd_cmp->add_option("--a", dir_a, "first run directory")->required();
  cmd_cmp->add_option("--b", dir_b, "second run directory")->required();
  cmd_cmp->add_option("--metric", metric,
                      "L1-density | fidelity | FON-max-dev | all");

  // weyl: CSF-count formula
  auto* cmd_weyl = app.add_subcommand("weyl", "Weyl CSF dimension count");
  add_global_flags(cmd_weyl, g);
  double weyl_s = 0.0;
  int weyl_no = 4, weyl_ne = 2;
  cmd_weyl->add_option("--S", weyl_s, "total spin");
  cmd_weyl->add_option("--orbitals", weyl_no, "number of spin orbitals N_o");
  cmd_weyl->add_option("--electrons", weyl_ne, "number of electrons N_e");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_integrals->parsed()) {
      cmqb::ScenarioConfig c = load_config(g);
      auto ints = cmqb::compute_or_load_integrals(c);
      cmqb::write_file(std::filesystem::path(c.out_dir) / "integrals.csv",
                       cmqb::integrals_csv(ints.tables));
      cmqb::write_file(std::filesystem::path(c.out_dir) / "taylor.csv",
                       cmqb::taylor_csv(ints.fits));
      std::printf("integrals: wrote integrals.csv, taylor.csv (cache %s)\n",
                  ints.from_cache ? "hit" : "miss");
      return 0;
    }
    if (cmd_map->parsed()) {
      cmqb::ScenarioConfig c = load_config(g);
      auto ints = cmqb::compute_or_load_integrals(c);
      auto spec = cmqb::build_molecular_qubit_hamiltonian(ints.fits, c.model);
      cmqb::write_file(std::filesystem::path(c.out_dir) / "hamiltonian.json",
                       cmqb::hamiltonian_to_json(spec).dump(2) + "\n");
      cmqb::write_file(std::filesystem::path(c.out_dir) / "mapped.csv",
                       cmqb::mapped_terms_csv(spec));
      std::printf("map: %zu coupled terms, omega=%s\n", spec.terms.size(),
                  cmqb::fmt(spec.omega).c_str());
      return 0;
    }
    if (cmd_sim->parsed()) {
      cmqb::ScenarioConfig c = load_config(g);
      if (!method.empty()) c.method = method;
      if (dt > 0) c.dt = dt;
      if (t_final > 0) c.t_final = t_final;
      if (!states.empty()) {
        c.states.clear();
        std::istringstream ss(states);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.states.push_back(std::stoi(tok));
      }
      c.validate();
      cmqb::run_scenario(c);
      std::printf("simulate: method=%s t=%s -> %s\n", c.method.c_str(),
                  cmqb::fmt(c.t_final).c_str(), c.out_dir.c_str());
      return 0;
    }
    if (cmd_tomo->parsed()) {
      cmqb::ScenarioConfig c = load_config(g);
      c.method = "exact";
      if (kpoints > 0) c.momentum_grid.n_k = kpoints;
      if (kspacing > 0) c.momentum_grid.dk = kspacing;
      if (shots >= 0) c.shots = shots;
      c.validate();
      cmqb::run_scenario(c);
      std::printf("tomography: %d k-points, dk=%s, shots=%ld -> %s\n",
                  c.momentum_grid.n_k, cmqb::fmt(c.momentum_grid.dk).c_str(),
                  c.shots, c.out_dir.c_str());
      return 0;
    }
    if (cmd_bo->parsed()) {
      cmqb::ScenarioConfig c = load_config(g);
      c.method = bo_full ? "bo-full" : "bo-gboa";
      if (!bo_states.empty()) {
        c.states.clear();
        std::istringstream ss(bo_states);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.states.push_back(std::stoi(tok));
      }
      c.validate();
      cmqb::run_scenario(c);
      std::printf("bo: method=%s -> %s\n", c.method.c_str(), c.out_dir.c_str());
      return 0;
    }
    if (cmd_cmp->parsed()) {
      const std::string report = cmqb::compare_runs(dir_a, dir_b, metric);
      const std::filesystem::path out =
          g.out_dir.empty() ? std::filesystem::path(dir_a) / "compare.csv"
                            : std::filesystem::path(g.out_dir) / "compare.csv";
      cmqb::write_file(out, report);
      std::cout << report;
      return 0;
    }
    if (cmd_weyl->parsed()) {
      const std::uint64_t n = cmqb::weyl_count(weyl_s, weyl_no, weyl_ne);
      std::ostringstream os;
      os << "# units: a.u.\nS,N_o,N_e,count\n"
         << cmqb::fmt(weyl_s) << "," << weyl_no << "," << weyl_ne << "," << n
         << "\n";
      if (!g.out_dir.empty())
        cmqb::write_file(std::filesystem::path(g.out_dir) / "weyl.csv",
                         os.str());
      std::cout << os.str();
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
