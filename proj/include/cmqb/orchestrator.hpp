#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmqb/bo.hpp"
#include "cmqb/config.hpp"
#include "cmqb/evolve.hpp"
#include "cmqb/hamiltonian.hpp"
#include "cmqb/io.hpp"
#include "cmqb/observables.hpp"
#include "cmqb/tomography.hpp"
#include "cmqb/trotter.hpp"

namespace cmqb {

inline const char* library_version() { return "1.0.0"; }

// Pipeline failure with the failing stage in the message.
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what) {}
};

namespace detail {

template <typename F>
auto run_stage(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

inline std::string time_label(double t) { return fmt(t); }

}  // namespace cmqb::detail

// Integral tables + fits, serialized together for the content-hash cache.
struct IntegralStageResult {
  IntegralTables tables;
  TaylorFitSet fits;
  bool from_cache = false;
};

inline nlohmann::json integral_stage_to_json(const IntegralStageResult& r) {
  nlohmann::json j;
  j["r_grid"] = detail::grid_to_json(r.tables.r_grid);
  for (const auto& label : integral_labels()) {
    const Eigen::VectorXd& v = r.tables.at(label);
    j["tables"][label] = std::vector<double>(v.data(), v.data() + v.size());
  }
  j["d_ab"] = std::vector<double>(r.tables.d_ab.data(),
                                  r.tables.d_ab.data() + r.tables.d_ab.size());
  j["g_ab"] = std::vector<double>(r.tables.g_ab.data(),
                                  r.tables.g_ab.data() + r.tables.g_ab.size());
  for (const auto& [label, f] : r.fits)
    j["fits"][label] = {{"v0", f.v0}, {"v1", f.v1}, {"residual", f.residual}};
  return j;
}

inline IntegralStageResult integral_stage_from_json(const nlohmann::json& j) {
  IntegralStageResult r;
  r.tables.r_grid = detail::grid_from_json(j.at("r_grid"), "cache.r_grid");
  for (const auto& label : integral_labels()) {
    auto v = j.at("tables").at(label).get<std::vector<double>>();
    r.tables.values[label] =
        Eigen::Map<const Eigen::VectorXd>(v.data(), long(v.size()));
  }
  auto d = j.at("d_ab").get<std::vector<double>>();
  auto g = j.at("g_ab").get<std::vector<double>>();
  r.tables.d_ab = Eigen::Map<const Eigen::VectorXd>(d.data(), long(d.size()));
  r.tables.g_ab = Eigen::Map<const Eigen::VectorXd>(g.data(), long(g.size()));
  for (auto it = j.at("fits").begin(); it != j.at("fits").end(); ++it)
    r.fits[it.key()] = {it.value().at("v0").get<double>(),
                        it.value().at("v1").get<double>(),
                        it.value().at("residual").get<double>()};
  return r;
}

// Key the integral cache by the content hash of everything upstream of the
// electronic-structure stage (never by timestamps).
inline std::string integral_cache_key(const ScenarioConfig& c) {
  nlohmann::json j = config_to_json(c);
  nlohmann::json key;
  key["model"] = j["model"];
  key["electron"] = j["grids"]["electron"];
  key["R"] = j["grids"]["R"];
  key["fit_window"] = c.fit_window;
  return content_hash(key.dump());
}

// Module-1 pipeline with transparent content-hash caching under
// <out_dir>/cache/. A missing or stale cache entry triggers recomputation.
inline IntegralStageResult compute_or_load_integrals(const ScenarioConfig& c) {
  const std::filesystem::path cache =
      std::filesystem::path(c.out_dir) / "cache" /
      ("integrals-" + integral_cache_key(c) + ".json");
  if (std::filesystem::exists(cache)) {
    IntegralStageResult r =
        integral_stage_from_json(nlohmann::json::parse(read_file(cache)));
    r.from_cache = true;
    return r;
  }
  IntegralStageResult r;
  OrbitalSet dia = diabatize(solve_adiabatic_set(c.electron_grid, c.r_grid,
                                                 c.model));
  r.tables = compute_electron_integrals(dia, c.model);
  r.fits = taylor_fit(r.tables, c.fit_window);
  write_file(cache, integral_stage_to_json(r).dump(2) + "\n");
  return r;
}

inline std::string integrals_csv(const IntegralTables& t) {
  std::vector<std::string> cols = {"R"};
  for (const auto& label : integral_labels()) cols.push_back(label);
  cols.push_back("d_ab");
  cols.push_back("g_ab");
  CsvWriter w(cols);
  for (int j = 0; j < t.r_grid.n; ++j) {
    std::vector<double> row = {t.r_grid.point(j)};
    for (const auto& label : integral_labels()) row.push_back(t.at(label)(j));
    row.push_back(t.d_ab(j));
    row.push_back(t.g_ab(j));
    w.row(row);
  }
  return w.str();
}

inline std::string taylor_csv(const TaylorFitSet& fits) {
  std::ostringstream os;
  os << "# units: a.u.\nlabel,v0,v1,residual\n";
  for (const auto& label : integral_labels()) {
    const TaylorFit& f = fits.at(label);
    os << label << "," << fmt(f.v0) << "," << fmt(f.v1) << ","
       << fmt(f.residual) << "\n";
  }
  return os.str();
}

inline std::string mapped_terms_csv(const CMQBHamiltonianSpec& spec) {
  std::ostringstream os;
  os << "# units: a.u.\npauli,group,V0,V1\n";
  for (const auto& t : spec.terms)
    os << t.pauli.str() << "," << t.group << "," << fmt(t.V0) << ","
       << fmt(t.V1) << "\n";
  return os.str();
}

inline std::string characteristic_csv(const CharacteristicSamples& cf) {
  CsvWriter w({"k", "C_re", "C_im"});
  for (int j = 0; j < cf.grid.n_k; ++j)
    w.row({cf.grid.k(j), cf.values(j).real(), cf.values(j).imag()});
  return w.str();
}

inline std::string state_csv(const VibronicState& st) {
  CsvWriter w({"fock", "qubit", "re", "im"});
  for (int v = 0; v < st.n_fock; ++v)
    for (int q = 0; q < st.qdim(); ++q)
      w.row({double(v), double(q), st.amp(v, q).real(), st.amp(v, q).imag()});
  return w.str();
}

inline std::string surfaces_csv(const BOSurfaceSet& s) {
  CsvWriter w({"R", "E1", "E2", "E3", "d12", "d13", "d23"});
  for (int j = 0; j < s.r_grid.n; ++j)
    w.row({s.r_grid.point(j), s.energies(0, j), s.energies(1, j),
           s.energies(2, j), s.d[j](0, 1), s.d[j](0, 2), s.d[j](1, 2)});
  return w.str();
}

// Nuclear density of a DVR state on an explicit output grid (per unit R).
inline DensityGrid dvr_nuclear_density(const DVRState& st,
                                       const Eigen::VectorXd& out_points) {
  const double dR = st.grid.spacing();
  DensityGrid out;
  out.R_points = out_points;
  out.values.resize(1, out_points.size());
  for (long m = 0; m < out_points.size(); ++m) {
    double f = (out_points(m) - st.grid.lo) / dR;
    f = std::min(std::max(f, 0.0), double(st.grid.n - 1));
    const int j0 = std::min(int(f), st.grid.n - 2);
    const double w = f - j0;
    double rho = 0.0;
    for (int a = 0; a < st.n_states(); ++a) {
      const cplx amp = (1.0 - w) * st.amp(a, j0) + w * st.amp(a, j0 + 1);
      rho += std::norm(amp);
    }
    out.values(0, m) = rho / dR;
  }
  return out;
}

struct RunArtifacts {
  std::filesystem::path dir;
  std::map<std::string, std::string> files;  // name -> content

  void add(const std::string& name, const std::string& content) {
    files[name] = content;
  }
  void write_all() const {
    for (const auto& [name, content] : files) write_file(dir / name, content);
  }
};

// End-to-end scenario runner: integrals -> mapping -> propagation ->
// measurement, with artifact files and a manifest in config.out_dir.
inline RunArtifacts run_scenario(const ScenarioConfig& config) {
  config.validate();
  RunArtifacts art;
  art.dir = config.out_dir;
  const nlohmann::json config_json = config_to_json(config);
  art.add("config.json", config_json.dump(2) + "\n");

  // ---- stage: integrals ----
  IntegralStageResult ints = detail::run_stage("integrals", [&] {
    return compute_or_load_integrals(config);
  });
  art.add("integrals.csv", integrals_csv(ints.tables));
  art.add("taylor.csv", taylor_csv(ints.fits));

  // ---- stage: mapping ----
  CMQBHamiltonianSpec spec = detail::run_stage("mapping", [&] {
    return build_molecular_qubit_hamiltonian(ints.fits, config.model);
  });
  art.add("hamiltonian.json", hamiltonian_to_json(spec).dump(2) + "\n");
  art.add("mapped.csv", mapped_terms_csv(spec));

  const std::vector<double> snapshots = config.snapshot_times();
  const bool qubit_method =
      config.method == "exact" || config.method == "trotter";

  if (qubit_method) {
    // ---- stage: propagation ----
    detail::run_stage("propagation", [&] {
      const Eigen::MatrixXcd h = symbolic_matrix(spec, config.n_fock);
      const VibronicState psi0 =
          prepare_initial_state(config.r0, config.occupation, config.n_fock,
                                spec.omega, spec.mass);

      std::vector<double> traj_times = uniform_times(config.t_final,
                                                     config.dt_out);
      std::vector<VibronicState> traj_states;
      std::vector<VibronicState> snap_states;
      std::vector<double> snap_actual;

      if (config.method == "exact") {
        std::set<double> all(traj_times.begin(), traj_times.end());
        for (double t : snapshots) all.insert(t);
        std::vector<double> times(all.begin(), all.end());
        PropagationResult res = exact_evolve(h, psi0, times);
        auto state_at = [&](double t) {
          const auto it = std::find(times.begin(), times.end(), t);
          return res.states[it - times.begin()];
        };
        for (double t : traj_times) traj_states.push_back(state_at(t));
        for (double t : snapshots) {
          snap_states.push_back(state_at(t));
          snap_actual.push_back(t);
        }
      } else {
        GateSchedule sched = trotterize(spec, config.t_final, config.dt,
                                        config.trotter_order);
        PropagationResult res = propagate_schedule(psi0, sched);
        auto nearest_step = [&](double t) {
          int s = int(std::lround(t / config.dt));
          return std::min(std::max(s, 0), sched.n_steps);
        };
        traj_times.clear();
        for (double t : uniform_times(config.t_final, config.dt_out)) {
          const int s = nearest_step(t);
          traj_times.push_back(res.times[s]);
          traj_states.push_back(res.states[s]);
        }
        // fidelity against the exact propagator at the matched step times
        std::vector<double> fid_times;
        for (double t : snapshots) fid_times.push_back(res.times[nearest_step(t)]);
        if (fid_times.empty() || fid_times.back() < sched.total_time())
          fid_times.push_back(sched.total_time());
        std::set<double> uniq(fid_times.begin(), fid_times.end());
        uniq.erase(0.0);
        std::vector<double> ex_times(uniq.begin(), uniq.end());
        PropagationResult ex = exact_evolve(h, psi0, ex_times);
        std::ostringstream fid;
        const std::filesystem::path fid_path = art.dir / "fidelity.csv";
        if (std::filesystem::exists(fid_path)) {
          fid << read_file(fid_path);
        } else {
          fid << "# units: a.u.\ndt,order,time,fidelity\n";
        }
        for (std::size_t i = 0; i < ex_times.size(); ++i) {
          const int s = nearest_step(ex_times[i]);
          fid << fmt(config.dt) << "," << config.trotter_order << ","
              << fmt(ex_times[i]) << ","
              << fmt(fidelity(ex.states[i], res.states[s])) << "\n";
        }
        art.add("fidelity.csv", fid.str());
        art.add("schedule.txt", schedule_text(sched));
        for (double t : snapshots) {
          const int s = nearest_step(t);
          snap_states.push_back(res.states[s]);
          snap_actual.push_back(res.times[s]);
        }
      }

      CsvWriter traj({"time", "n1", "n2", "n3", "n4", "norm", "energy"});
      {
        Eigen::VectorXd fon0 = occupation_numbers(psi0);
        traj.row({0.0, fon0(0), fon0(1), fon0(2), fon0(3), psi0.norm(),
                  expectation(psi0, h).real()});
      }
      for (std::size_t i = 0; i < traj_times.size(); ++i) {
        const Eigen::VectorXd fon = occupation_numbers(traj_states[i]);
        traj.row({traj_times[i], fon(0), fon(1), fon(2), fon(3),
                  traj_states[i].norm(),
                  expectation(traj_states[i], h).real()});
      }
      art.add("trajectory.csv", traj.str());

      // ---- stage: measurement ----
      detail::run_stage("measurement", [&] {
        for (std::size_t i = 0; i < snapshots.size(); ++i) {
          const std::string label = detail::time_label(snapshots[i]);
          CharacteristicSamples cf =
              characteristic_function(snap_states[i], config.momentum_grid);
          cf.time = snap_actual[i];
          cf = sample_characteristic(cf, config.shots,
                                     config.seed + 0x9e3779b97f4a7c15ull * i);
          art.add("characteristic_t" + label + ".csv", characteristic_csv(cf));
          // with sampled values the transform has shot noise; relax the
          // imaginary-residue guard accordingly
          const double tol =
              config.shots > 0 ? 10.0 / std::sqrt(double(config.shots)) : 1e-6;
          DensityGrid rho = reconstruct_nuclear_density(cf, tol);
          art.add("density_nuclear_t" + label + ".csv", density_csv(rho));
          art.add("state_t" + label + ".csv", state_csv(snap_states[i]));
        }
        return 0;
      });
      return 0;
    });
  } else {
    // ---- stage: propagation (Born-Huang reference) ----
    detail::run_stage("propagation", [&] {
      BOSurfaceSet surf = diagonalize_bo(ints.fits, config.dvr_grid);
      compute_nacs(surf, ints.fits);
      art.add("surfaces.csv", surfaces_csv(surf));
      const std::vector<int> subset = config.method == "bo-full"
                                          ? std::vector<int>{1, 2, 3}
                                          : config.states;
      BHHamiltonian bh = build_bh_hamiltonian(surf, config.model, subset);
      DVRState st0 = initial_state_bo(config.r0, surf, subset,
                                      config.model.omega(), config.model.M);
      std::set<double> all;
      for (double t : uniform_times(config.t_final, config.dt_out))
        all.insert(t);
      for (double t : snapshots) all.insert(t);
      std::vector<double> times(all.begin(), all.end());
      BHPropagation res = propagate_bh(st0, bh, times);

      const Eigen::VectorXcd h_psi0 = bh.h.cast<cplx>() * st0.amplitudes;
      const double e0 = st0.amplitudes.dot(h_psi0).real();
      CsvWriter traj({"time", "n1", "n2", "n3", "n4", "norm", "energy"});
      {
        const Eigen::VectorXd fon = bo_occupation_numbers(st0, surf);
        traj.row({0.0, fon(0), fon(1), fon(2), fon(3), st0.norm(), e0});
      }
      for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::VectorXd fon = bo_occupation_numbers(res.states[i], surf);
        traj.row({times[i], fon(0), fon(1), fon(2), fon(3),
                  res.states[i].norm(), e0});
      }
      art.add("trajectory.csv", traj.str());

      // ---- stage: measurement (direct densities on the conjugate grid) ----
      detail::run_stage("measurement", [&] {
        const Eigen::VectorXd out_points = config.momentum_grid.r_points();
        for (double t : snapshots) {
          const auto it = std::find(times.begin(), times.end(), t);
          const DVRState& st = res.states[it - times.begin()];
          DensityGrid rho = dvr_nuclear_density(st, out_points);
          rho.time = t;
          art.add("density_nuclear_t" + detail::time_label(t) + ".csv",
                  density_csv(rho));
        }
        return 0;
      });
      return 0;
    });
  }

  // ---- manifest ----
  nlohmann::json manifest;
  const std::filesystem::path man_path = art.dir / "manifest.json";
  if (std::filesystem::exists(man_path))
    manifest = nlohmann::json::parse(read_file(man_path));
  manifest["library_version"] = library_version();
  nlohmann::json run;
  run["config_hash"] = content_hash(config_json.dump());
  run["method"] = config.method;
  run["dt"] = config.dt;
  run["seed"] = config.seed;
  run["integral_cache"] = integral_cache_key(config);
  run["integral_cache_hit"] = ints.from_cache;
  for (const auto& [name, content] : art.files)
    run["artifacts"][name] = content_hash(content);
  manifest["runs"].push_back(run);
  art.add("manifest.json", manifest.dump(2) + "\n");

  art.write_all();
  return art;
}

// ---- comparison of two finished runs ----

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return int(i);
    throw std::invalid_argument("CsvTable: no column " + name);
  }
};

inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header_done) {
      t.columns = cells;
      header_done = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::stod(c));
    if (row.size() != t.columns.size())
      throw std::runtime_error("parse_csv: ragged row");
    t.rows.push_back(row);
  }
  return t;
}

// Per-time metric table between two finished run directories. Metrics:
// L1-density (matching density_nuclear_t*.csv), fidelity (matching
// state_t*.csv), FON-max-dev (trajectory.csv at matching times); "all" runs
// every metric with matching artifacts.
inline std::string compare_runs(const std::filesystem::path& dir_a,
                                const std::filesystem::path& dir_b,
                                const std::string& metric = "all") {
  const bool want_l1 = metric == "all" || metric == "L1-density";
  const bool want_fid = metric == "all" || metric == "fidelity";
  const bool want_fon = metric == "all" || metric == "FON-max-dev";
  if (!want_l1 && !want_fid && !want_fon)
    throw std::invalid_argument("compare_runs: unknown metric " + metric);

  std::ostringstream os;
  os << "# units: a.u.\ntime,metric,value\n";
  std::vector<std::tuple<double, std::string, double>> entries;

  auto snapshot_files = [](const std::filesystem::path& dir,
                           const std::string& prefix) {
    std::map<double, std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      const std::string name = e.path().filename().string();
      if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() + 4) {
        const std::string t = name.substr(prefix.size(),
                                          name.size() - prefix.size() - 4);
        out[std::stod(t)] = e.path();
      }
    }
    return out;
  };

  if (want_l1) {
    auto a = snapshot_files(dir_a, "density_nuclear_t");
    auto b = snapshot_files(dir_b, "density_nuclear_t");
    for (const auto& [t, pa] : a) {
      auto it = b.find(t);
      if (it == b.end()) continue;
      CsvTable ta = parse_csv(read_file(pa));
      CsvTable tb = parse_csv(read_file(it->second));
      if (ta.rows.size() != tb.rows.size())
        throw std::invalid_argument("compare_runs: density grid mismatch at t=" +
                                    fmt(t));
      const int rc = ta.col("R"), vc = ta.col("rho");
      double l1 = 0.0;
      const double dR = ta.rows.size() > 1
                            ? ta.rows[1][rc] - ta.rows[0][rc]
                            : 1.0;
      for (std::size_t i = 0; i < ta.rows.size(); ++i) {
        if (std::abs(ta.rows[i][rc] - tb.rows[i][rc]) > 1e-9)
          throw std::invalid_argument("compare_runs: density grid mismatch");
        l1 += std::abs(ta.rows[i][vc] - tb.rows[i][vc]) * dR;
      }
      entries.emplace_back(t, "L1-density", l1);
    }
  }
  if (want_fid) {
    auto a = snapshot_files(dir_a, "state_t");
    auto b = snapshot_files(dir_b, "state_t");
    for (const auto& [t, pa] : a) {
      auto it = b.find(t);
      if (it == b.end()) continue;
      CsvTable ta = parse_csv(read_file(pa));
      CsvTable tb = parse_csv(read_file(it->second));
      if (ta.rows.size() != tb.rows.size())
        throw std::invalid_argument("compare_runs: state dimension mismatch");
      const int re = ta.col("re"), im = ta.col("im");
      cplx overlap = 0.0;
      for (std::size_t i = 0; i < ta.rows.size(); ++i)
        overlap += std::conj(cplx(ta.rows[i][re], ta.rows[i][im])) *
                   cplx(tb.rows[i][re], tb.rows[i][im]);
      entries.emplace_back(t, "fidelity", std::norm(overlap));
    }
  }
  if (want_fon) {
    CsvTable ta = parse_csv(read_file(dir_a / "trajectory.csv"));
    CsvTable tb = parse_csv(read_file(dir_b / "trajectory.csv"));
    const int tc = ta.col("time");
    std::map<double, std::vector<double>> rows_b;
    for (const auto& r : tb.rows) rows_b[r[tb.col("time")]] = r;
    for (const auto& ra : ta.rows) {
      auto it = rows_b.find(ra[tc]);
      if (it == rows_b.end()) continue;
      double dev = 0.0;
      for (const char* c : {"n1", "n2", "n3", "n4"})
        dev = std::max(dev,
                       std::abs(ra[ta.col(c)] - it->second[tb.col(c)]));
      entries.emplace_back(ra[tc], "FON-max-dev", dev);
    }
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& x, const auto& y) {
                     return std::get<0>(x) < std::get<0>(y);
                   });
  for (const auto& [t, m, v] : entries)
    os << fmt(t) << "," << m << "," << fmt(v) << "\n";
  return os.str();
}

}  // namespace cmqb
