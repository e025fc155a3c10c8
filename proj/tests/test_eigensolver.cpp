#include <doctest.h>

#include <cmath>

#include "halfline/eigensolver.hpp"
#include "halfline/potentials.hpp"
#include "oracles.hpp"

using namespace halfline;

namespace {

void check_against(const NegativeSpectrum& s, const std::vector<double>& ref, double tol) {
  REQUIRE(s.size() == ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) {
    CHECK(std::abs(s.pairs[k].lambda - ref[k]) <= tol * (1 + std::abs(ref[k])));
  }
}

}  // namespace

TEST_CASE("free operator with an attractive Robin condition") {
  // phi = sqrt(2) e^{-x}, lambda = -1
  const auto s = negative_eigenvalues(family_free(-1.0));
  REQUIRE(s.size() == 1);
  CHECK(s.pairs[0].lambda == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(s.pairs[0].phi0 * s.pairs[0].phi0 == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(s.pairs[0].dphi0 == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-7));
  const auto& phi = s.pairs[0].phi;
  CHECK(integrate(phi * phi) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("free operator with a repulsive Robin condition has no bound state") {
  CHECK(negative_eigenvalues(family_free(1.0)).empty());
  CHECK(negative_eigenvalues(family_free(0.0)).empty());
}

TEST_CASE("square wells against the matching condition") {
  SUBCASE("Neumann") {
    check_against(negative_eigenvalues(family_square_well(4, 1, BoundaryCondition::neumann())),
                  oracle::square_well(4, 1, 0, false), 1e-7);
  }
  SUBCASE("Dirichlet") {
    check_against(negative_eigenvalues(family_square_well(25, 1, BoundaryCondition::dirichlet())),
                  oracle::square_well(25, 1, 0, true), 1e-7);
  }
  SUBCASE("Robin, attractive") {
    check_against(negative_eigenvalues(family_square_well(9, 2, BoundaryCondition::robin(-1.5))),
                  oracle::square_well(9, 2, -1.5, false), 1e-7);
  }
  SUBCASE("Robin, repulsive") {
    check_against(negative_eigenvalues(family_square_well(9, 2, BoundaryCondition::robin(2.0))),
                  oracle::square_well(9, 2, 2.0, false), 1e-7);
  }
}

TEST_CASE("library oracle agrees with the test oracle") {
  const auto lib = square_well_eigenvalues(16, 1.3, BoundaryCondition::robin(-0.7));
  const auto ref = oracle::square_well(16, 1.3, -0.7, false);
  REQUIRE(lib.size() == ref.size());
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(lib[k] == doctest::Approx(ref[k]).epsilon(1e-10));
}

TEST_CASE("scaling covariance") {
  // V_s(x) = s^2 V(s x), sigma_s = s sigma  =>  lambda_s = s^2 lambda
  const double s = 2.0;
  const auto a = negative_eigenvalues(family_square_well(6, 1.5, BoundaryCondition::robin(-0.4)));
  const auto b = negative_eigenvalues(family_square_well(s * s * 6, 1.5 / s, BoundaryCondition::robin(-0.4 * s)));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(b.pairs[k].lambda == doctest::Approx(s * s * a.pairs[k].lambda).epsilon(1e-7));
  }
}

TEST_CASE("eigenfunctions are orthonormal") {
  const auto s = negative_eigenvalues(family_square_well(30, 2, BoundaryCondition::neumann()));
  REQUIRE(s.size() >= 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double ip = inner_product(s.pairs[i].phi, s.pairs[j].phi);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-6);
    }
  }
}

TEST_CASE("boundary data satisfy the condition") {
  const auto bc = BoundaryCondition::robin(-0.8);
  const auto s = negative_eigenvalues(family_square_well(10, 1, bc));
  for (const auto& p : s.pairs) {
    const auto d = boundary_data(p, s.problem.bc);
    CHECK(std::abs(d.dphi0 - (-0.8) * d.phi0) < 1e-6);
  }
  const auto sd = negative_eigenvalues(family_square_well(10, 1, BoundaryCondition::dirichlet()));
  for (const auto& p : sd.pairs) CHECK(std::abs(p.phi0) < 1e-12);
}

TEST_CASE("discretization is second order") {
  const auto st = convergence_study(family_square_well(9, 1, BoundaryCondition::neumann()));
  REQUIRE(!st.ratios.empty());
  for (double r : st.ratios) {
    CHECK(r >= 3.4);
    CHECK(r <= 4.6);
  }
}

TEST_CASE("too short a domain is detected") {
  // kappa = 0.1 needs L of several hundred; without doublings L = 20 is too short
  GridOptions g;
  g.length = 20.0;
  g.intervals = 8000;
  SolverOptions o;
  o.max_doublings = 0;
  CHECK_THROWS_AS(negative_eigenvalues(family_free(-0.1, g), o), Error);
  try {
    negative_eigenvalues(family_free(-0.1, g), o);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TruncationTooSmall);
  }
}

TEST_CASE("short domains are extended automatically") {
  GridOptions g;
  g.length = 20.0;
  g.intervals = 8000;
  const auto s = negative_eigenvalues(family_free(-0.3, g));
  REQUIRE(s.size() == 1);
  CHECK(s.pairs[0].lambda == doctest::Approx(-0.09).epsilon(1e-7));
  CHECK(s.refinement.domain_doublings >= 1);
}
