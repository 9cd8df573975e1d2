#include <doctest.h>

#include <filesystem>

#include "cmqb/config.hpp"
#include "cmqb/io.hpp"
#include "cmqb/orchestrator.hpp"

using namespace cmqb;

TEST_CASE("scenario config JSON round-trip preserves every field") {
  ScenarioConfig c;
  c.model.C_c = 0.61;
  c.electron_grid = SpatialGrid{-8.0, 8.0, 401};
  c.r_grid = SpatialGrid{-0.6, 0.6, 121};
  c.dvr_grid = SpatialGrid{-0.9, 0.9, 900};
  c.n_fock = 24;
  c.momentum_grid = MomentumGrid{200, 1.5};
  c.fit_window = 0.5;
  c.method = "trotter";
  c.dt = 2.8;
  c.trotter_order = 1;
  c.t_final = 500.0;
  c.dt_out = 50.0;
  c.density_times = {56.1, 499.0};
  c.r0 = 0.12;
  c.occupation = "1001";
  c.states = {1, 3};
  c.shots = 2048;
  c.seed = 99;
  c.out_dir = "elsewhere";

  const ScenarioConfig back = config_from_json(config_to_json(c));
  CHECK(back.model.C_c == c.model.C_c);
  CHECK(back.electron_grid.n == 401);
  CHECK(back.r_grid.hi == 0.6);
  CHECK(back.dvr_grid.n == 900);
  CHECK(back.n_fock == 24);
  CHECK(back.momentum_grid.n_k == 200);
  CHECK(back.momentum_grid.dk == 1.5);
  CHECK(back.fit_window == 0.5);
  CHECK(back.method == "trotter");
  CHECK(back.dt == 2.8);
  CHECK(back.trotter_order == 1);
  CHECK(back.t_final == 500.0);
  CHECK(back.dt_out == 50.0);
  CHECK(back.density_times == c.density_times);
  CHECK(back.r0 == 0.12);
  CHECK(back.occupation == "1001");
  CHECK(back.states == c.states);
  CHECK(back.shots == 2048);
  CHECK(back.seed == 99);
  CHECK(back.out_dir == "elsewhere");
  // serialization is deterministic
  CHECK(config_to_json(back).dump() == config_to_json(c).dump());
}

TEST_CASE("unknown config keys are rejected, including nested ones") {
  nlohmann::json j = config_to_json(ScenarioConfig{});
  nlohmann::json bad1 = j;
  bad1["surprise"] = 1;
  CHECK_THROWS_AS(config_from_json(bad1), std::invalid_argument);
  nlohmann::json bad2 = j;
  bad2["model"]["mass"] = 1.0;  // must be "M"
  CHECK_THROWS(config_from_json(bad2));
  nlohmann::json bad3 = j;
  bad3["grids"]["electron"]["step"] = 0.01;
  CHECK_THROWS(config_from_json(bad3));
}

TEST_CASE("config validation rejects inconsistent settings") {
  auto broken = [](auto&& tweak) {
    ScenarioConfig c;
    tweak(c);
    return c;
  };
  CHECK_THROWS(broken([](ScenarioConfig& c) { c.method = "magic"; }).validate());
  CHECK_THROWS(broken([](ScenarioConfig& c) { c.n_fock = 1; }).validate());
  CHECK_THROWS(broken([](ScenarioConfig& c) { c.occupation = "11000"; }).validate());
  CHECK_THROWS(broken([](ScenarioConfig& c) { c.shots = -1; }).validate());
  CHECK_THROWS(broken([](ScenarioConfig& c) { c.trotter_order = 4; }).validate());
  CHECK_THROWS(
      broken([](ScenarioConfig& c) { c.density_times = {2000.0}; }).validate());
  CHECK_THROWS(broken([](ScenarioConfig& c) { c.states = {0, 1}; }).validate());
  CHECK_THROWS(broken([](ScenarioConfig& c) { c.states = {}; }).validate());
}

TEST_CASE("default snapshot times track t_final") {
  ScenarioConfig c;
  CHECK(c.snapshot_times() == std::vector<double>{56.1, 1514.4});
  c.t_final = 200.0;
  CHECK(c.snapshot_times() == std::vector<double>{56.1});
  c.t_final = 30.0;
  CHECK(c.snapshot_times() == std::vector<double>{30.0});
  c.density_times = {10.0, 20.0};
  CHECK(c.snapshot_times() == c.density_times);
}

TEST_CASE("content hash: FNV-1a reference values, stability") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == content_hash("a"));
  CHECK(content_hash("a") != content_hash("b"));
}

TEST_CASE("integral cache key depends only on upstream inputs") {
  ScenarioConfig a;
  ScenarioConfig b = a;
  b.method = "trotter";
  b.seed = 1234;
  b.shots = 100;
  b.n_fock = 30;
  CHECK(integral_cache_key(a) == integral_cache_key(b));  // downstream only
  ScenarioConfig c = a;
  c.model.C_c = 0.7;
  CHECK(integral_cache_key(a) != integral_cache_key(c));
  ScenarioConfig d = a;
  d.r_grid.n = 201;
  CHECK(integral_cache_key(a) != integral_cache_key(d));
  ScenarioConfig e = a;
  e.fit_window = 0.4;
  CHECK(integral_cache_key(a) != integral_cache_key(e));
}

TEST_CASE("csv writer emits the units comment, header, and fixed columns") {
  CsvWriter w({"time", "value"});
  w.row({1.0, -0.25});
  const std::string text = w.str();
  CHECK(text == "# units: a.u.\ntime,value\n1,-0.25\n");
  CHECK_THROWS(w.row({1.0}));
}

TEST_CASE("csv parser: comments skipped, ragged rows rejected") {
  const CsvTable t = parse_csv("# units: a.u.\ntime,x\n0,1\n2,3\n");
  REQUIRE(t.columns.size() == 2);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.col("x") == 1);
  CHECK(t.rows[1][1] == 3.0);
  CHECK_THROWS(t.col("missing"));
  CHECK_THROWS(parse_csv("a,b\n1\n"));
}

TEST_CASE("density csv layouts: nuclear-only and joint") {
  DensityGrid nuc;
  nuc.R_points = Eigen::VectorXd::LinSpaced(3, -1.0, 1.0);
  nuc.values = Eigen::MatrixXd::Zero(1, 3);
  nuc.values(0, 1) = 0.5;
  const CsvTable tn = parse_csv(density_csv(nuc));
  CHECK(tn.columns == std::vector<std::string>{"R", "rho"});
  CHECK(tn.rows.size() == 3);
  CHECK(tn.rows[1][1] == 0.5);

  DensityGrid joint = nuc;
  joint.r_points = Eigen::VectorXd::LinSpaced(2, -1.0, 1.0);
  joint.values = Eigen::MatrixXd::Constant(2, 3, 0.25);
  const CsvTable tj = parse_csv(density_csv(joint));
  CHECK(tj.columns == std::vector<std::string>{"r", "R", "rho"});
  CHECK(tj.rows.size() == 6);  // r-fastest
  CHECK(tj.rows[1][0] == 1.0);
  CHECK(tj.rows[1][1] == -1.0);
}

TEST_CASE("compare_runs on hand-written artifacts") {
  namespace fs = std::filesystem;
  const fs::path base =
      fs::temp_directory_path() / "cmqb-compare-test";
  fs::remove_all(base);
  const fs::path da = base / "a", db = base / "b";

  const std::string density =
      "# units: a.u.\nR,rho\n-1,0.1\n0,0.8\n1,0.1\n";
  const std::string density_shifted =
      "# units: a.u.\nR,rho\n-1,0.2\n0,0.7\n1,0.1\n";
  const std::string state =
      "# units: a.u.\nfock,qubit,re,im\n0,0,1,0\n0,1,0,0\n";
  const std::string state_rot =
      "# units: a.u.\nfock,qubit,re,im\n0,0,0,1\n0,1,0,0\n";
  const std::string traj =
      "# units: a.u.\ntime,n1,n2,n3,n4,norm,energy\n0,1,1,0,0,1,-5\n"
      "56.1,0.9,0.9,0.1,0.1,1,-5\n";
  const std::string traj_dev =
      "# units: a.u.\ntime,n1,n2,n3,n4,norm,energy\n0,1,1,0,0,1,-5\n"
      "56.1,0.8,0.8,0.2,0.2,1,-5\n";

  write_file(da / "density_nuclear_t56.1.csv", density);
  write_file(da / "state_t56.1.csv", state);
  write_file(da / "trajectory.csv", traj);
  write_file(db / "density_nuclear_t56.1.csv", density_shifted);
  write_file(db / "state_t56.1.csv", state_rot);
  write_file(db / "trajectory.csv", traj_dev);

  // the metric column is textual, so pull values out by (time, metric) key
  auto metric_value = [](const std::string& text, const std::string& time,
                         const std::string& metric) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      const std::string prefix = time + "," + metric + ",";
      if (line.rfind(prefix, 0) == 0)
        return std::stod(line.substr(prefix.size()));
    }
    throw std::runtime_error("metric row not found: " + time + "," + metric);
  };

  // identical directories give exactly zero L1 / unit fidelity / zero FON dev
  const std::string self = compare_runs(da, da, "all");
  CHECK(metric_value(self, "56.1", "L1-density") == 0.0);
  CHECK(metric_value(self, "56.1", "fidelity") == doctest::Approx(1.0));
  CHECK(metric_value(self, "0", "FON-max-dev") == 0.0);
  CHECK(metric_value(self, "56.1", "FON-max-dev") == 0.0);

  // cross comparison picks up the differences
  const std::string cross = compare_runs(da, db, "all");
  // (0.1 + 0.1) * dR = 0.2 with dR = 1
  CHECK(metric_value(cross, "56.1", "L1-density") == doctest::Approx(0.2));
  CHECK(metric_value(cross, "56.1", "fidelity") ==
        doctest::Approx(1.0));  // global phase drops out
  CHECK(metric_value(cross, "56.1", "FON-max-dev") == doctest::Approx(0.1));
  CHECK_THROWS(compare_runs(da, db, "chi-squared"));

  // mismatched density grids are an error, not a silent zero
  write_file(db / "density_nuclear_t56.1.csv",
             "# units: a.u.\nR,rho\n-1,0.1\n1,0.1\n");
  CHECK_THROWS(compare_runs(da, db, "L1-density"));
  fs::remove_all(base);
}

TEST_CASE("metric column is textual in compare output") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "cmqb-compare-metric";
  fs::remove_all(base);
  write_file(base / "a" / "trajectory.csv",
             "# units: a.u.\ntime,n1,n2,n3,n4,norm,energy\n0,1,1,0,0,1,-5\n");
  write_file(base / "b" / "trajectory.csv",
             "# units: a.u.\ntime,n1,n2,n3,n4,norm,energy\n0,1,1,0,0,1,-5\n");
  const std::string out = compare_runs(base / "a", base / "b", "FON-max-dev");
  CHECK(out.find("time,metric,value") != std::string::npos);
  CHECK(out.find("FON-max-dev") != std::string::npos);
  fs::remove_all(base);
}
