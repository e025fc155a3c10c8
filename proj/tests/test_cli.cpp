#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "halfline/cli.hpp"

using namespace halfline;

TEST_CASE("config text round trip") {
  RunConfig c;
  c.subcommand = "verify";
  c.family = "square-well";
  c.bc = "dirichlet";
  c.depth = 12.5;
  c.width = 0.1 + 0.2;  // not exactly representable in short decimal
  c.length = 40;
  c.order = {2, 1};
  c.sweep = 5;
  c.seed = 18446744073709551615ull;
  c.sigma_range = {-1, 1.5};
  const auto dir = std::filesystem::temp_directory_path() / "halfline_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / "config.txt";
  std::ofstream(path) << to_config_text(c);
  const RunConfig r = read_config(path);
  CHECK(to_config_text(r) == to_config_text(c));
  CHECK(r.width == c.width);
  CHECK(r.seed == c.seed);
  CHECK(r.order == std::vector<int>{2, 1});
}

TEST_CASE("bad settings are rejected") {
  RunConfig c;
  CHECK_THROWS_AS(apply_setting(c, "bogus", "1"), Error);
  CHECK_THROWS_AS(apply_setting(c, "sigma0", "abc"), Error);
  CHECK_THROWS_AS(apply_setting(c, "bc", "periodic"), Error);
  CHECK_THROWS_AS(apply_setting(c, "depth-range", "3"), Error);
  apply_setting(c, "sigma_range", "-1, 1");
  CHECK(c.sigma_range.second == 1.0);
}

TEST_CASE("solve on the free family") {
  RunConfig c;
  c.subcommand = "solve";
  c.family = "free";
  c.sigma0 = -1;
  const auto r = cmd_solve(c);
  CHECK(r.ok);
  const auto& ev = r.output["spectrum"]["eigenvalues"];
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].get<double>() == doctest::Approx(-1.0).epsilon(1e-6));

  c.sigma0 = 1;
  const auto empty = cmd_solve(c);
  CHECK(empty.ok);
  CHECK(empty.output["spectrum"]["eigenvalues"].empty());
}

TEST_CASE("solve count matches the reference for a well") {
  RunConfig c;
  c.subcommand = "solve";
  c.family = "square-well";
  c.bc = "neumann";
  const auto r = cmd_solve(c);
  CHECK(r.output["spectrum"]["eigenvalues"].size() == r.output["reference_eigenvalues"].size());
}

TEST_CASE("verify on the insertion family") {
  RunConfig c;
  c.subcommand = "verify";
  c.family = "neumann-insertion";
  const auto r = cmd_verify(c);
  CHECK(r.ok);
  CHECK(r.output["reports"][0]["kind"] == "main_robin");
  CHECK(std::abs(r.output["reports"][0]["gap"].get<double>()) <= 1e-5);
  CHECK(r.output["dominance"]["slack"].get<double>() == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("verify on a Dirichlet well") {
  RunConfig c;
  c.subcommand = "verify";
  c.family = "square-well";
  c.bc = "dirichlet";
  c.depth = 25;
  const auto r = cmd_verify(c);
  CHECK(r.ok);
  CHECK(r.output["weak_order"].get<bool>());
}

TEST_CASE("commute with a permuted order") {
  RunConfig c;
  c.subcommand = "commute";
  c.family = "square-well";
  c.bc = "neumann";
  c.depth = 16;
  c.order = {2, 1};
  c.diagnostics = true;
  const auto r = cmd_commute(c);
  CHECK(r.ok);
  CHECK(r.output["chain"]["steps"].size() == 2);
  CHECK(r.output["chain"]["final_eigenvalues"].empty());
  CHECK(r.output["diagnostics"][0]["riccati"].is_null());
  CHECK(r.output["diagnostics"][1]["riccati"].is_object());
}

TEST_CASE("plotdata columns") {
  const auto dir = std::filesystem::temp_directory_path() / "halfline_tests" / "plot";
  RunConfig c;
  c.subcommand = "plotdata";
  c.family = "free";
  c.sigma0 = 1;
  c.out = dir.string();
  auto r = cmd_plotdata(c);
  CHECK(r.output["columns"] == Json::array({"x", "V"}));

  c.family = "square-well";
  c.bc = "neumann";
  c.depth = 16;
  r = cmd_plotdata(c);
  CHECK(r.output["columns"] ==
        Json::array({"x", "V", "V_1", "V_2", "phi_1", "phi_2", "F", "F_tilde", "G"}));
}

TEST_CASE("sweeps are deterministic") {
  RunConfig c;
  c.subcommand = "verify";
  c.sweep = 4;
  c.seed = 99;
  const auto a = run_sweep(c);
  const auto b = run_sweep(c);
  CHECK(dump(sweep_summary(c, a)) == dump(sweep_summary(c, b)));
  for (const auto& s : a) CHECK(s.ok);
  c.seed = 100;
  CHECK(dump(sweep_summary(c, run_sweep(c))) != dump(sweep_summary(c, a)));
}

TEST_CASE("families listing") {
  RunConfig c;
  c.subcommand = "families";
  CHECK(cmd_families(c).output["families"].size() == 3);
}
