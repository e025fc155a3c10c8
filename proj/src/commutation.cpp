#include "halfline/commutation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace halfline {

namespace {

constexpr double kPhiFloor = 1e-300;

// Fourth-order first derivative (five-point central, one-sided at the ends).
SampledFunction derivative4(const SampledFunction& f) {
  const auto& v = f.values();
  const Eigen::Index n = f.grid().intervals();
  const double h12 = 12.0 * f.grid().spacing();
  Eigen::ArrayXd d(v.size());
  for (Eigen::Index i = 2; i + 2 <= n; ++i) d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / h12;
  d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / h12;
  d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / h12;
  d[n] = (25.0 * v[n] - 48.0 * v[n - 1] + 36.0 * v[n - 2] - 16.0 * v[n - 3] + 3.0 * v[n - 4]) / h12;
  d[n - 1] = (3.0 * v[n] + 10.0 * v[n - 1] - 18.0 * v[n - 2] + 6.0 * v[n - 3] - v[n - 4]) / h12;
  return SampledFunction(f.grid(), std::move(d));
}

double max_abs_over(const Eigen::ArrayXd& v, const Problem& p, Eigen::Index first, Eigen::Index last) {
  double m = 0.0;
  for (Eigen::Index i = first; i <= last; ++i) {
    if (p.near_discontinuity(i)) continue;
    m = std::max(m, std::abs(v[i]));
  }
  return m;
}

void require_grid(const Problem& p, const SampledFunction& f, const char* what) {
  if (!(p.grid() == f.grid())) {
    throw Error(ErrorKind::Configuration, std::string(what) + " lives on a different grid than the problem");
  }
}

// Discrete eigen-equation check: the pair must satisfy the matrix equation of
// the problem up to the Richardson shift of lambda.
void check_eigenpair(const Problem& p, const EigenPair& pair) {
  require_grid(p, pair.phi, "eigenfunction");
  const auto& u = pair.phi.values();
  const auto& v = p.potential.values();
  const Eigen::ArrayXd d2 = second_difference(pair.phi);
  const Eigen::Index n = p.grid().intervals();
  double r = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) r = std::max(r, std::abs(-d2[i] + (v[i] - pair.lambda) * u[i]));
  const double scale = u.abs().maxCoeff() * (1.0 + std::abs(pair.lambda) + v.abs().maxCoeff());
  if (!(r <= 1e-5 * scale)) {
    std::ostringstream os;
    os << "pair with lambda = " << pair.lambda << " misses the eigen-equation (residual " << r / scale << ")";
    throw Error(ErrorKind::NotAnEigenpair, os.str());
  }
  if (p.bc.is_dirichlet() && u[0] != 0.0) {
    throw Error(ErrorKind::NotAnEigenpair, "Dirichlet eigenfunction does not vanish at 0");
  }
}

}  // namespace

namespace {

// Diagnostics differentiate phi'/phi twice; inverse-iteration noise near the
// decay floor would dominate, so they stop earlier than the removal itself.
constexpr double kDiagnosticFloor = 1e-8;

// V - 2 G' on one grid, cut past the decay floor of phi.
struct RemovalCore {
  Eigen::ArrayXd Phi;
  Eigen::ArrayXd dphi;
  Eigen::ArrayXd G;
  Eigen::ArrayXd dG;
  Eigen::ArrayXd raw;
  Eigen::ArrayXd out;
  double gamma;
  double Phi_end;
  Eigen::Index window;
  Eigen::Index x0;
};

RemovalCore removal_core(const SampledFunction& v, const SampledFunction& phi, double support_end) {
  const Grid& grid = phi.grid();
  const Eigen::ArrayXd& u = phi.values();
  RemovalCore c;
  const double norm_sq = integrate(phi * phi);
  c.gamma = -1.0 / norm_sq;
  // Phi = 1 + gamma int_0^x phi^2 = int_x^L phi^2 / ||phi||^2, summed from the right
  c.Phi = reverse_cumulative_integral(phi * phi).values() / norm_sq;
  c.Phi_end = c.Phi[c.Phi.size() - 1];
  c.Phi = c.Phi.max(kPhiFloor);

  c.dphi = derivative4(phi).values();
  const Eigen::ArrayXd q = u.square() / c.Phi;
  c.G = c.gamma * q;
  c.dG = c.gamma * (2.0 * u * c.dphi / c.Phi - c.gamma * q.square());
  c.raw = v.values() - 2.0 * c.dG;

  // Past the decay floor of phi the quotient q is noise over noise; there the
  // potential is zero and G' vanishes exactly on the exponential tail.
  c.window = check_window_end(grid);
  c.x0 = grid.node_at_or_after(support_end);
  const Eigen::Index keep = std::min(c.window, std::max(c.x0, last_resolved_node(phi)));
  c.out = Eigen::ArrayXd::Zero(c.raw.size());
  c.out.head(keep + 1) = c.raw.head(keep + 1);
  return c;
}

}  // namespace

CommutationStep double_commute_remove(const Problem& problem, const EigenPair& pair) {
  check_eigenpair(problem, pair);
  const Grid& grid = problem.grid();
  const RemovalCore c = removal_core(problem.potential, pair.phi, problem.support_end);
  const double norm_sq = -1.0 / c.gamma;

  BoundaryCondition after = problem.bc;
  double weight = 0.0;
  if (problem.bc.is_robin()) {
    weight = pair.phi0 * pair.phi0 / norm_sq;
    after = BoundaryCondition::robin(problem.bc.sigma() + weight);
  } else {
    weight = pair.dphi0 * pair.dphi0 / norm_sq;
  }

  SampledFunction v_out(grid, c.out);
  Problem output(v_out, after, problem.support_end, false, problem.discontinuities);
  if (pair.phi_coarse) {
    const Problem coarse = coarsen(problem);
    output = with_partner(std::move(output),
                          SampledFunction(coarse.grid(),
                                          removal_core(coarse.potential, *pair.phi_coarse,
                                                       problem.support_end).out));
  }
  const Eigen::Index w = c.window;
  const double support_residual = c.x0 <= w ? max_abs_over(c.out, problem, c.x0, w) : 0.0;

  return CommutationStep{
      pair.lambda,
      c.gamma,
      SampledFunction(grid, c.Phi),
      problem.bc,
      after,
      weight,
      problem.potential,
      v_out,
      SampledFunction(grid, c.raw),
      pair.phi,
      SampledFunction(grid, c.dphi),
      SampledFunction(grid, c.G),
      SampledFunction(grid, c.dG),
      extrapolated_square_integral(problem, w),
      extrapolated_square_integral(output, w),
      w,
      support_residual,
      c.Phi_end,
      c.Phi_end < 1e-6,
      std::move(output),
  };
}

Seed sampled_seed(const SampledFunction& u) {
  return Seed{u, derivative(u), cumulative_integral(u * u)};
}

Seed cosh_seed(const Grid& grid, double omega) {
  auto u = SampledFunction::from_function(grid, [omega](double x) { return std::cosh(omega * x); });
  auto du = SampledFunction::from_function(
      grid, [omega](double x) { return omega * std::sinh(omega * x); });
  auto integral = SampledFunction::from_function(grid, [omega](double x) {
    return omega == 0.0 ? x : 0.5 * x + std::sinh(2.0 * omega * x) / (4.0 * omega);
  });
  return Seed{u, du, integral};
}

double seed_residual(const Problem& problem, const Seed& seed, double lambda) {
  require_grid(problem, seed.u, "seed");
  const auto& u = seed.u.values();
  const auto& v = problem.potential.values();
  const double h = problem.grid().spacing();
  const Eigen::Index n = problem.grid().intervals();
  double worst = 0.0;
  for (Eigen::Index i = 2; i + 2 <= n; ++i) {
    if (problem.near_discontinuity(i) || problem.near_discontinuity(i - 1) ||
        problem.near_discontinuity(i + 1)) {
      continue;
    }
    const double d2 =
        (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
    const double rhs = (v[i] - lambda) * u[i];
    const double scale = std::abs(d2) + std::abs(rhs) + std::abs(lambda * u[i]);
    if (scale > 0) worst = std::max(worst, std::abs(-d2 + rhs) / scale);
  }
  return worst;
}

Problem double_commute_insert(const Problem& problem, const Seed& seed, double lambda,
                              double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::Configuration, "insertion needs gamma > 0");
  }
  require_grid(problem, seed.u, "seed");
  require_grid(problem, seed.du, "seed derivative");
  require_grid(problem, seed.integral, "seed integral");
  const double res = seed_residual(problem, seed, lambda);
  if (res > 1e-6) {
    std::ostringstream os;
    os << "seed misses -u'' + (V - lambda) u = 0 by " << res << " (relative)";
    throw Error(ErrorKind::SeedResidualTooLarge, os.str());
  }
  const auto& u = seed.u.values();
  if (problem.bc.is_dirichlet()) {
    if (u[0] != 0.0) throw Error(ErrorKind::SeedResidualTooLarge, "seed violates the Dirichlet condition");
  } else {
    const double mismatch = seed.du[0] - problem.bc.sigma() * u[0];
    if (std::abs(mismatch) > 1e-6 * (1.0 + std::abs(seed.du[0]))) {
      throw Error(ErrorKind::SeedResidualTooLarge, "seed violates the Robin condition");
    }
  }

  const Eigen::ArrayXd Phi = 1.0 + gamma * seed.integral.values();
  const Eigen::ArrayXd q = u.square() / Phi;
  const Eigen::ArrayXd dG = gamma * (2.0 * u * seed.du.values() / Phi - gamma * q.square());
  const Eigen::ArrayXd delta = -2.0 * dG;
  if (!delta.allFinite()) {
    throw Error(ErrorKind::Configuration, "seed overflows on this domain; shorten L");
  }

  // the inserted part decays exponentially; cut it where it drops below 1e-14
  Eigen::Index last = 0;
  for (Eigen::Index i = delta.size() - 1; i >= 0; --i) {
    if (std::abs(delta[i]) >= 1e-14) {
      last = i;
      break;
    }
  }
  const Grid& grid = problem.grid();
  const Eigen::Index x0 = std::max(grid.node_at_or_after(problem.support_end),
                                   std::min<Eigen::Index>(last + 1, grid.intervals()));
  Eigen::ArrayXd v = problem.potential.values();
  v.head(x0) += delta.head(x0);

  BoundaryCondition bc = problem.bc.is_dirichlet()
                             ? problem.bc
                             : BoundaryCondition::robin(problem.bc.sigma() - gamma * u[0] * u[0]);
  return Problem(SampledFunction(grid, std::move(v)), bc, grid.node(x0), false,
                 problem.discontinuities);
}

namespace {

Eigen::ArrayXd single_core(const SampledFunction& v, const SampledFunction& phi, double lambda,
                           bool check_zeros) {
  const Grid& grid = phi.grid();
  const auto& u = phi.values();
  const Eigen::Index w = std::min(check_window_end(grid), last_resolved_node(phi));
  const double peak = u.abs().maxCoeff();
  for (Eigen::Index i = 0; check_zeros && i <= w; ++i) {
    if (!(u[i] >= 1e-12 * peak)) {
      throw Error(ErrorKind::GroundStateHasZeros, "eigenfunction is not zero-free; not the ground state");
    }
  }
  const Eigen::ArrayXd F = derivative4(phi).values() / u.max(kPhiFloor);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(u.size());
  out.head(w + 1) = -v.values().head(w + 1) + 2.0 * lambda + 2.0 * F.head(w + 1).square();
  return out;
}

}  // namespace

Problem single_commute_remove(const Problem& problem, const EigenPair& ground) {
  check_eigenpair(problem, ground);
  if (problem.bc.is_dirichlet()) {
    throw Error(ErrorKind::GroundStateHasZeros, "Dirichlet ground state vanishes at the origin");
  }
  const Grid& grid = problem.grid();
  Problem output(SampledFunction(grid, single_core(problem.potential, ground.phi, ground.lambda, true)),
                 BoundaryCondition::dirichlet(), problem.support_end, false,
                 problem.discontinuities);
  if (ground.phi_coarse) {
    const Problem coarse = coarsen(problem);
    output = with_partner(
        std::move(output),
        SampledFunction(coarse.grid(),
                        single_core(coarse.potential, *ground.phi_coarse, ground.lambda, false)));
  }
  return output;
}

SampledFunction transform_eigenfunction(const CommutationStep& step, const EigenPair& psi) {
  if (std::abs(psi.lambda - step.lambda_removed) <= 1e-9 * (1.0 + std::abs(step.lambda_removed))) {
    throw Error(ErrorKind::SameEigenvalue, "cannot transform the removed eigenfunction itself");
  }
  const Grid& grid = step.phi_used.grid();
  if (!(psi.phi.grid() == grid)) {
    throw Error(ErrorKind::Configuration, "eigenfunction lives on a different grid than the step");
  }
  const auto& phi = step.phi_used.values();
  const auto& Phi = step.Phi.values();
  const SampledFunction prod = psi.phi * step.phi_used;
  const Eigen::ArrayXd forward = cumulative_integral(prod).values();
  const Eigen::ArrayXd backward = reverse_cumulative_integral(prod).values();

  // Near x = L both phi / Phi and the overlap integral are at noise level;
  // past the resolved part of phi (and beyond the support) the exact tail
  // relation psi_out = psi (k2 - k1)/(k2 + k1) is used instead.
  const Eigen::Index w = check_window_end(grid);
  const Eigen::Index resolved = std::min(w, last_resolved_node(step.phi_used));
  const double k1 = std::sqrt(-step.lambda_removed);
  const double k2 = std::sqrt(std::max(-psi.lambda, 0.0));
  const double tail_ratio = (k2 - k1) / (k2 + k1);
  const Eigen::Index x0 = grid.node_at_or_after(step.output.support_end);

  Eigen::ArrayXd out(phi.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (i > resolved && i >= x0) {
      out[i] = psi.phi[i] * tail_ratio;
      continue;
    }
    const double overlap = Phi[i] >= 0.5 ? forward[i] : -backward[i];
    out[i] = psi.phi[i] - step.gamma * phi[i] / Phi[i] * overlap;
  }
  return SampledFunction(grid, std::move(out));
}

RiccatiDiagnostics riccati_diagnostics(const Problem& problem, const EigenPair& ground,
                                       const CommutationStep& step) {
  const Grid& grid = problem.grid();
  const auto& u = ground.phi.values();
  const Eigen::Index e = std::min(check_window_end(grid), last_resolved_node(ground.phi, kDiagnosticFloor));
  const double peak = u.abs().maxCoeff();
  for (Eigen::Index i = problem.bc.is_robin() ? 0 : 1; i <= e; ++i) {
    if (!(u[i] >= 1e-12 * peak)) {
      throw Error(ErrorKind::GroundStateHasZeros, "eigenfunction is not zero-free; not the ground state");
    }
  }
  if (problem.bc.is_dirichlet()) {
    throw Error(ErrorKind::GroundStateHasZeros, "Dirichlet ground state vanishes at the origin");
  }

  const Eigen::ArrayXd dphi = derivative(ground.phi).values();
  Eigen::ArrayXd F = Eigen::ArrayXd::Zero(u.size());
  Eigen::ArrayXd Ft = Eigen::ArrayXd::Zero(u.size());
  Eigen::ArrayXd G = Eigen::ArrayXd::Zero(u.size());
  F.head(e + 1) = dphi.head(e + 1) / u.head(e + 1);
  G.head(e + 1) = step.G.values().head(e + 1);
  // phi_tilde = phi / Phi, so F_tilde = F - gamma phi^2 / Phi = F - G
  Ft.head(e + 1) = F.head(e + 1) - G.head(e + 1);
  // the boundary value is reported on its own; the one-sided second-order
  // stencil is not accurate enough there
  F[0] = derivative4(ground.phi).values()[0] / u[0];
  Ft[0] = F[0] - G[0];

  const SampledFunction Fs(grid, F);
  const SampledFunction Fts(grid, Ft);
  const Eigen::ArrayXd dF = derivative(Fs).values();
  const Eigen::ArrayXd dFt = derivative(Fts).values();
  const auto& v = problem.potential.values();
  const double lambda = ground.lambda;

  double rF = 0.0, rFt = 0.0, dec = 0.0;
  // from x_2 on: the central difference at x_1 reaches the boundary node
  for (Eigen::Index i = 2; i < e; ++i) {
    if (problem.near_discontinuity(i)) continue;
    rF = std::max(rF, std::abs(F[i] * F[i] + dF[i] - v[i] + lambda));
    rFt = std::max(rFt, std::abs(Ft[i] * Ft[i] - dFt[i] + 2.0 * dF[i] - v[i] + lambda));
    dec = std::max(dec, std::abs(G[i] - (F[i] - Ft[i])));
  }

  const double kappa = std::sqrt(-lambda);
  double tailF = 0.0, tailFt = 0.0;
  const Eigen::Index x0 = grid.node_at_or_after(problem.support_end);
  for (Eigen::Index i = x0; i <= e; ++i) {
    if (problem.near_discontinuity(i)) continue;
    tailF = std::max(tailF, std::abs(F[i] + kappa));
    tailFt = std::max(tailFt, std::abs(Ft[i] - kappa));
  }

  return RiccatiDiagnostics{Fs,
                            Fts,
                            SampledFunction(grid, G),
                            rF,
                            rFt,
                            dec,
                            F[0],
                            Ft[0],
                            step.sigma_before(),
                            step.sigma_after(),
                            kappa,
                            tailF,
                            tailFt,
                            e};
}

AntiderivativeCheck antiderivative_identity_check(const Problem& problem, const EigenPair& pair,
                                                  const CommutationStep& step) {
  const Grid& grid = problem.grid();
  require_grid(problem, pair.phi, "eigenfunction");
  const auto& u = step.phi_used.values();
  const auto& du = step.dphi.values();
  const auto& Phi = step.Phi.values();
  const double g = step.gamma;
  const Eigen::ArrayXd q = u.square() / Phi;
  const Eigen::ArrayXd& dG = step.dG.values();
  const Eigen::ArrayXd lhs = dG * (dG - problem.potential.values());
  const Eigen::ArrayXd bracket =
      std::abs(pair.lambda) * step.G.values() -
      (g * du.square() / Phi - g * g * du * u * q / Phi + g * g * g * q.cube() / 3.0);
  const Eigen::ArrayXd dB = derivative(SampledFunction(grid, bracket)).values();

  Eigen::Index w = std::min(step.window_end, last_resolved_node(step.phi_used, kDiagnosticFloor));
  w -= w % 2;
  double residual = 0.0, scale = 0.0;
  for (Eigen::Index i = 1; i < w; ++i) {
    if (problem.near_discontinuity(i)) continue;
    residual = std::max(residual, std::abs(lhs[i] - dB[i]));
    scale = std::max(scale, std::abs(lhs[i]));
  }
  // both sides vanish when G' does (free operator); fall back to the natural sizes
  scale = std::max(scale, pair.lambda * pair.lambda);
  const double quad = integrate_to(SampledFunction(grid, lhs), w);
  const double ends = bracket[w] - bracket[0];
  const double l = std::abs(pair.lambda);
  const double rel = std::abs(quad - ends) / std::max({std::abs(quad), std::abs(ends), l * std::sqrt(l)});
  return AntiderivativeCheck{residual, scale, quad, ends, rel};
}

namespace {

std::vector<int> normalized_order(const std::vector<int>& order, std::size_t count) {
  std::vector<int> out = order;
  if (out.empty()) {
    for (std::size_t k = 0; k < count; ++k) out.push_back(static_cast<int>(k + 1));
    return out;
  }
  std::vector<int> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  bool ok = sorted.size() == count;
  for (std::size_t k = 0; ok && k < count; ++k) ok = sorted[k] == static_cast<int>(k + 1);
  if (!ok) {
    std::ostringstream os;
    os << "removal order must be a permutation of 1.." << count;
    throw Error(ErrorKind::Configuration, os.str());
  }
  return out;
}

}  // namespace

CommutationChain build_chain(const Problem& problem, const std::vector<int>& order,
                             const SolverOptions& options) {
  NegativeSpectrum current = negative_eigenvalues(problem, options);
  CommutationChain chain{current, {}, {}, {}, {}, current, {}, {}};
  chain.order = normalized_order(order, current.size());
  const std::vector<double> original = current.eigenvalues();
  if (current.problem.bc.is_robin()) chain.sigma_sequence.push_back(current.problem.bc.sigma());

  for (int label : chain.order) {
    const double target = original[static_cast<std::size_t>(label - 1)];
    std::size_t pick = 0;
    for (std::size_t k = 1; k < current.size(); ++k) {
      if (std::abs(current.pairs[k].lambda - target) < std::abs(current.pairs[pick].lambda - target)) {
        pick = k;
      }
    }
    if (current.empty()) {
      throw Error(ErrorKind::NotAnEigenpair, "spectrum exhausted before the removal order");
    }
    const EigenPair& pair = current.pairs[pick];
    CommutationStep step = double_commute_remove(current.problem, pair);
    NegativeSpectrum next = negative_eigenvalues(step.output, options);

    StageSpectrum stage{label, current.eigenvalues(), next.eigenvalues(), 0.0, false, false};
    std::vector<double> expected = stage.before;
    expected.erase(expected.begin() + static_cast<std::ptrdiff_t>(pick));
    stage.removed_exactly_one = stage.after.size() == expected.size();
    stage.preserved = stage.removed_exactly_one;
    if (stage.removed_exactly_one) {
      for (std::size_t k = 0; k < expected.size(); ++k) {
        const double err = std::abs(stage.after[k] - expected[k]);
        stage.preservation_error = std::max(stage.preservation_error, err);
        if (err > std::max(1e-6, 1e-6 * std::abs(expected[k]))) stage.preserved = false;
      }
    }
    if (step.robin()) chain.sigma_sequence.push_back(step.sigma_after());
    chain.step_inputs.push_back(current.problem);
    chain.removed_pairs.push_back(pair);
    chain.steps.push_back(std::move(step));
    chain.stages.push_back(std::move(stage));
    current = std::move(next);
  }
  chain.final_spectrum = std::move(current);
  return chain;
}

}  // namespace halfline
