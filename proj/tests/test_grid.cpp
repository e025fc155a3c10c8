#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "halfline/grid.hpp"
#include "halfline/tridiagonal.hpp"

using namespace halfline;

TEST_CASE("simpson integral of exp(-2x) on [0, 40]") {
  const Grid g(40.0, 4096);
  const auto f = SampledFunction::from_function(g, [](double x) { return std::exp(-2.0 * x); });
  CHECK(integrate(f) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("integral of a constant is exact") {
  const Grid g(3.0, 64);
  CHECK(integrate(SampledFunction::constant(g, 2.0)) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("odd interval count is rejected") {
  const Grid g(1.0, 17);
  CHECK_THROWS_AS(integrate(SampledFunction::constant(g, 1.0)), Error);
}

TEST_CASE("cumulative integrals") {
  const Grid g(10.0, 1001);  // odd count exercises the split last panel
  const auto f = SampledFunction::from_function(g, [](double x) { return std::exp(-x) * (1 + x * x); });
  const auto F = cumulative_integral(f);
  const auto R = reverse_cumulative_integral(f);
  for (Eigen::Index i = 1; i < F.size(); ++i) {
    REQUIRE(F[i] >= F[i - 1]);
    REQUIRE(R[i] <= R[i - 1]);
  }
  // int_0^x e^{-t}(1 + t^2) dt = 3 - e^{-x}(x^2 + 2x + 3)
  auto exact = [](double x) { return 3.0 - std::exp(-x) * (x * x + 2 * x + 3); };
  double err = 0;
  for (Eigen::Index i = 0; i < F.size(); ++i) err = std::max(err, std::abs(F[i] - exact(g.node(i))));
  CHECK(err < 1e-8);
  // the odd panel is split at opposite ends, so the totals agree to O(h^4)
  CHECK(F.back() == doctest::Approx(R.front()).epsilon(1e-9));
}

TEST_CASE("derivative is second order") {
  auto err = [](Eigen::Index n) {
    const Grid g(2.0, n);
    const auto f = SampledFunction::from_function(g, [](double x) { return std::sin(3 * x); });
    const auto d = derivative(f);
    double e = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) e = std::max(e, std::abs(d[i] - 3 * std::cos(3 * g.node(i))));
    return e;
  };
  const double ratio = err(200) / err(400);
  CHECK(ratio > 3.5);
  CHECK(ratio < 8.5);  // interior second order, ends third order
}

TEST_CASE("second difference of a quadratic is exact") {
  const Grid g(1.0, 20);
  const auto f = SampledFunction::from_function(g, [](double x) { return 2 * x * x - x; });
  const auto d2 = second_difference(f);
  for (Eigen::Index i = 1; i < 20; ++i) CHECK(d2[i] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("subsample and restrict keep the node values") {
  const Grid g(4.0, 32);
  const auto f = SampledFunction::from_function(g, [](double x) { return x * x; });
  const auto s = subsample(f);
  CHECK(s.grid() == Grid(4.0, 16));
  for (Eigen::Index i = 0; i <= 16; ++i) CHECK(s[i] == f[2 * i]);
  const auto r = restrict_to(f, 16);
  CHECK(r.grid().length() == doctest::Approx(2.0));
  CHECK(r.back() == doctest::Approx(4.0));
}

TEST_CASE("Sturm count and bisection against a dense solver") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 40;
  SymTridiagonal<double> t;
  t.diag = Eigen::ArrayXd(n);
  t.off = Eigen::ArrayXd(n - 1);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) dense(i, i) = t.diag[i] = 3 * u(rng);
  for (int i = 0; i + 1 < n; ++i) dense(i, i + 1) = dense(i + 1, i) = t.off[i] = u(rng);
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense).eigenvalues();
  CHECK(sturm_count(t, 0.0) == (ref.array() < 0.0).count());
  const auto [lo, hi] = t.gershgorin();
  for (int k = 0; k < n; k += 7) {
    const double l = bisect_eigenvalue(t, k, lo, hi, 1e-14);
    CHECK(l == doctest::Approx(ref[k]).epsilon(1e-10));
    const auto it = inverse_iteration<double>(t, l, {}, 1e-10);
    const Eigen::VectorXd v = it.vector.matrix();
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK((dense * v - l * v).norm() < 1e-9);
  }
}
