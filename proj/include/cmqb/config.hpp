#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmqb/grid.hpp"
#include "cmqb/model.hpp"
#include "cmqb/tomography.hpp"

namespace cmqb {

// Full scenario description for the end-to-end runner. Defaults reproduce the
// reference model setup; every physical quantity is in atomic units.
struct ScenarioConfig {
  ModelParams model;

  // grids
  SpatialGrid electron_grid{-9.0, 9.0, 601};
  SpatialGrid r_grid{-0.8, 0.8, 161};
  SpatialGrid dvr_grid{-1.0, 1.0, 1500};
  int n_fock = 20;
  MomentumGrid momentum_grid;  // 250 points, dk = 1.26
  double fit_window = 0.8;

  // dynamics
  std::string method = "exact";  // exact | trotter | bo-full | bo-gboa
  double dt = 5.6;
  int trotter_order = 2;
  double t_final = 1514.4;
  double dt_out = 151.44;             // trajectory sampling interval
  std::vector<double> density_times;  // snapshot times (default below)
  double r0 = 0.1;
  std::string occupation = "1100";
  std::vector<int> states = {2, 3};  // GBOA subset for method bo-gboa

  // measurement
  long shots = 0;  // 0 = exact expectation values
  std::uint64_t seed = 0;

  std::string out_dir = "out";

  void validate() const {
    model.validate();
    if (n_fock < 2) throw std::invalid_argument("config: n_fock < 2");
    if (momentum_grid.n_k <= 0 || momentum_grid.dk <= 0)
      throw std::invalid_argument("config: bad momentum grid");
    if (fit_window <= 0) throw std::invalid_argument("config: fit_window <= 0");
    if (method != "exact" && method != "trotter" && method != "bo-full" &&
        method != "bo-gboa")
      throw std::invalid_argument("config: unknown method " + method);
    if (dt <= 0) throw std::invalid_argument("config: dt <= 0");
    if (trotter_order != 1 && trotter_order != 2)
      throw std::invalid_argument("config: trotter_order must be 1 or 2");
    if (t_final <= 0) throw std::invalid_argument("config: t_final <= 0");
    if (dt_out <= 0) throw std::invalid_argument("config: dt_out <= 0");
    for (double t : density_times)
      if (t < 0 || t > t_final)
        throw std::invalid_argument("config: density time outside [0, t_final]");
    for (int s : states)
      if (s < 1 || s > 3)
        throw std::invalid_argument("config: BO state labels must be in 1..3");
    if (states.empty()) throw std::invalid_argument("config: empty state subset");
    if (occupation.size() != 4)
      throw std::invalid_argument("config: occupation must have 4 bits");
    if (shots < 0) throw std::invalid_argument("config: shots < 0");
  }

  std::vector<double> snapshot_times() const {
    if (!density_times.empty()) return density_times;
    std::vector<double> t = {56.1};
    if (t_final >= 1514.4) t.push_back(1514.4);
    while (!t.empty() && t.back() > t_final) t.pop_back();
    if (t.empty()) t.push_back(t_final);
    return t;
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " +
                                  where);
}

inline SpatialGrid grid_from_json(const nlohmann::json& j,
                                  const std::string& where) {
  reject_unknown_keys(j, {"lo", "hi", "n"}, where);
  return SpatialGrid(j.at("lo").get<double>(), j.at("hi").get<double>(),
                     j.at("n").get<int>());
}

inline nlohmann::json grid_to_json(const SpatialGrid& g) {
  return {{"lo", g.lo}, {"hi", g.hi}, {"n", g.n}};
}

}  // namespace detail

inline nlohmann::json config_to_json(const ScenarioConfig& c) {
  nlohmann::json j;
  j["model"] = {{"M", c.model.M},     {"k", c.model.k},     {"L", c.model.L},
                {"C_l", c.model.C_l}, {"C_r", c.model.C_r}, {"C_c", c.model.C_c},
                {"C_e", c.model.C_e}};
  j["grids"] = {{"electron", detail::grid_to_json(c.electron_grid)},
                {"R", detail::grid_to_json(c.r_grid)},
                {"dvr", detail::grid_to_json(c.dvr_grid)},
                {"n_fock", c.n_fock},
                {"kpoints", c.momentum_grid.n_k},
                {"kspacing", c.momentum_grid.dk}};
  j["fit_window"] = c.fit_window;
  j["method"] = c.method;
  j["dt"] = c.dt;
  j["trotter_order"] = c.trotter_order;
  j["t_final"] = c.t_final;
  j["dt_out"] = c.dt_out;
  j["density_times"] = c.density_times;
  j["r0"] = c.r0;
  j["occupation"] = c.occupation;
  j["states"] = c.states;
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  return j;
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(
      j,
      {"model", "grids", "fit_window", "method", "dt", "trotter_order",
       "t_final", "dt_out", "density_times", "r0", "occupation", "states",
       "shots", "seed", "out_dir"},
      "top level");
  ScenarioConfig c;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    detail::reject_unknown_keys(m, {"M", "k", "L", "C_l", "C_r", "C_c", "C_e"},
                                "model");
    if (m.contains("M")) c.model.M = m.at("M").get<double>();
    if (m.contains("k")) c.model.k = m.at("k").get<double>();
    if (m.contains("L")) c.model.L = m.at("L").get<double>();
    if (m.contains("C_l")) c.model.C_l = m.at("C_l").get<double>();
    if (m.contains("C_r")) c.model.C_r = m.at("C_r").get<double>();
    if (m.contains("C_c")) c.model.C_c = m.at("C_c").get<double>();
    if (m.contains("C_e")) c.model.C_e = m.at("C_e").get<double>();
  }
  if (j.contains("grids")) {
    const auto& g = j.at("grids");
    detail::reject_unknown_keys(
        g, {"electron", "R", "dvr", "n_fock", "kpoints", "kspacing"}, "grids");
    if (g.contains("electron"))
      c.electron_grid = detail::grid_from_json(g.at("electron"), "grids.electron");
    if (g.contains("R")) c.r_grid = detail::grid_from_json(g.at("R"), "grids.R");
    if (g.contains("dvr"))
      c.dvr_grid = detail::grid_from_json(g.at("dvr"), "grids.dvr");
    if (g.contains("n_fock")) c.n_fock = g.at("n_fock").get<int>();
    if (g.contains("kpoints")) c.momentum_grid.n_k = g.at("kpoints").get<int>();
    if (g.contains("kspacing"))
      c.momentum_grid.dk = g.at("kspacing").get<double>();
  }
  if (j.contains("fit_window")) c.fit_window = j.at("fit_window").get<double>();
  if (j.contains("method")) c.method = j.at("method").get<std::string>();
  if (j.contains("dt")) c.dt = j.at("dt").get<double>();
  if (j.contains("trotter_order"))
    c.trotter_order = j.at("trotter_order").get<int>();
  if (j.contains("t_final")) c.t_final = j.at("t_final").get<double>();
  if (j.contains("dt_out")) c.dt_out = j.at("dt_out").get<double>();
  if (j.contains("density_times"))
    c.density_times = j.at("density_times").get<std::vector<double>>();
  if (j.contains("r0")) c.r0 = j.at("r0").get<double>();
  if (j.contains("occupation"))
    c.occupation = j.at("occupation").get<std::string>();
  if (j.contains("states")) c.states = j.at("states").get<std::vector<int>>();
  if (j.contains("shots")) c.shots = j.at("shots").get<long>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  c.validate();
  return c;
}

}  // namespace cmqb
