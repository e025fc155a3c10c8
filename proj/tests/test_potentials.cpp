#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "halfline/csv.hpp"
#include "halfline/inequalities.hpp"
#include "halfline/potentials.hpp"

using namespace halfline;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "halfline_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Configuration;
}

}  // namespace

TEST_CASE("insertion family closed form") {
  // (3/16) int V^2 = gamma^3/4 - 3 gamma omega^2/4 + omega^3
  for (auto [w, g] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {0.5, 0.5}, {2.0, 2.0}}) {
    const double closed = g * g * g / 4 - 0.75 * g * w * w + w * w * w;
    CHECK(neumann_insertion_moment(w, g) == doctest::Approx(closed).epsilon(1e-14));
    const Problem p = family_neumann_insertion(w, g);
    CHECK(3.0 / 16.0 * potential_square_integral(p) == doctest::Approx(closed).epsilon(1e-5));
  }
  CHECK(neumann_insertion_moment(1, 1) == doctest::Approx(0.5));
  CHECK(neumann_insertion_moment(1, 2) == doctest::Approx(1.5));
}

TEST_CASE("insertion potential matches a finite-difference evaluation") {
  // V = -2 d/dx [gamma cosh^2 / (1 + gamma int cosh^2)], checked by central differences
  const double w = 1.3, g = 0.7;
  auto G = [&](double x) {
    const double c = std::cosh(w * x);
    const double integral = x / 2 + std::sinh(2 * w * x) / (4 * w);
    return g * c * c / (1 + g * integral);
  };
  for (double x : {0.1, 0.7, 2.0, 5.0}) {
    const double h = 1e-5;
    CHECK(neumann_insertion_potential(x, w, g) ==
          doctest::Approx(-2 * (G(x + h) - G(x - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("family parameter guards") {
  CHECK(kind_of([] { square_well_family(1000, 2, BoundaryCondition::neumann()); }) == ErrorKind::Configuration);
  CHECK(kind_of([] { square_well_family(-1, 1, BoundaryCondition::neumann()); }) == ErrorKind::Configuration);
  CHECK(kind_of([] { neumann_insertion_family(1, 0); }) == ErrorKind::Configuration);
}

TEST_CASE("square-well grid puts a node on the edge") {
  const Problem p = family_square_well(4, 1.3, BoundaryCondition::neumann());
  const Eigen::Index i = p.grid().node_at_or_after(1.3);
  CHECK(p.grid().node(i) == doctest::Approx(1.3).epsilon(1e-13));
  CHECK(p.potential[i] == doctest::Approx(-2.0));
  CHECK(p.grid().intervals() % 8 == 0);
}

TEST_CASE("csv round trip") {
  const Grid g(5.0, 64);
  const auto f = SampledFunction::from_function(g, [](double x) { return -std::exp(-x) * std::sin(3 * x) - 1; });
  const auto path = temp_file("roundtrip.csv");
  write_sampled_csv(path, f);
  const auto table = read_sample_table(path);
  REQUIRE(table.x.size() == 65);
  double err = 0;
  for (std::size_t i = 0; i < table.x.size(); ++i) err = std::max(err, std::abs(table.value[i] - f[i]));
  CHECK(err <= 1e-10);

  LoadOptions o;
  o.lt_mode = false;
  o.grid.length = 5.0;
  o.grid.intervals = 64;
  const Problem p = load_potential(path, BoundaryCondition::neumann(), o);
  CHECK(p.grid() == g);
  CHECK((p.potential.values() - f.values()).abs().maxCoeff() <= 1e-10);

  // by default the file spacing is kept and the domain extended with zeros
  LoadOptions d;
  d.lt_mode = false;
  const Problem q = load_potential(path, BoundaryCondition::neumann(), d);
  CHECK(q.grid().spacing() == doctest::Approx(g.spacing()).epsilon(1e-12));
  CHECK(q.grid().length() >= 15.0);
  CHECK((q.potential.values().head(65) - f.values()).abs().maxCoeff() <= 1e-10);
  CHECK(q.potential.values().tail(q.potential.size() - 65).abs().maxCoeff() == 0.0);
}

TEST_CASE("load_potential errors") {
  const auto bc = BoundaryCondition::neumann();
  const auto short_file = temp_file("short.csv");
  write_text(short_file, "x,value\n0,-1\n1,-1\n2,0\n");
  CHECK(kind_of([&] { load_potential(short_file, bc); }) == ErrorKind::GridTooCoarse);

  const auto shifted = temp_file("shifted.csv");
  write_text(shifted, "x,value\n0.5,-1\n1,-1\n2,-1\n3,0\n4,0\n");
  CHECK(kind_of([&] { load_potential(shifted, bc); }) == ErrorKind::InvalidInput);

  const auto unsorted = temp_file("unsorted.csv");
  write_text(unsorted, "x,value\n0,-1\n2,-1\n1,-1\n3,0\n4,0\n");
  CHECK(kind_of([&] { load_potential(unsorted, bc); }) == ErrorKind::InvalidInput);

  const auto garbage = temp_file("garbage.csv");
  write_text(garbage, "x,value\n0,-1\n1,abc\n2,-1\n3,0\n4,0\n");
  CHECK(kind_of([&] { load_potential(garbage, bc); }) == ErrorKind::InvalidInput);

  const auto positive = temp_file("positive.csv");
  write_text(positive, "x,value\n0,-1\n1,0.5\n2,-1\n3,0\n4,0\n");
  CHECK(kind_of([&] { load_potential(positive, bc); }) == ErrorKind::HypothesisViolated);
  LoadOptions relaxed;
  relaxed.lt_mode = false;
  CHECK_NOTHROW(load_potential(positive, bc, relaxed));
}

TEST_CASE("monotone resampling does not overshoot") {
  SampleTable t{{0, 1, 2, 3, 4}, {-1, -1, -0.2, 0, 0}};
  const auto f = monotone_cubic_resample(t, Grid(4.0, 400));
  CHECK(f.values().maxCoeff() <= 1e-15);
  CHECK(f.values().minCoeff() >= -1 - 1e-15);
  CHECK(f[100] == doctest::Approx(-1.0));
}

TEST_CASE("family registry lists every family") {
  const auto r = family_registry();
  REQUIRE(r.size() == 3);
  CHECK(r[0].name == "free");
  CHECK(r[1].name == "square-well");
  CHECK(r[2].name == "neumann-insertion");
}
