#include "halfline/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace halfline {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

struct GridSolution {
  std::vector<double> lambdas;
  std::vector<SampledFunction> phis;  // normalized, sign convention applied
  std::vector<double> norms;
  std::vector<double> residuals;
};

double boundary_slope(const SampledFunction& phi) {
  const auto& u = phi.values();
  const double h = phi.grid().spacing();
  return (-11.0 * u[0] + 18.0 * u[1] - 9.0 * u[2] + 2.0 * u[3]) / (6.0 * h);
}

GridSolution solve_grid(const Problem& problem, double tol) {
  const Discretization sys = discretize(problem);
  const auto& t = sys.matrix;
  GridSolution out;

  const Eigen::Index count = sturm_count(t, 0.0);
  if (count == 0) return out;
  const double lo = t.gershgorin().first - 1.0;

  std::vector<Eigen::ArrayXd> vectors;
  for (Eigen::Index k = 0; k < count; ++k) {
    const double lambda = bisect_eigenvalue(t, k, lo, 0.0, tol);
    auto inv = inverse_iteration<double>(t, lambda, vectors, 1e-10);
    vectors.push_back(inv.vector);

    SampledFunction u = sys.to_samples(inv.vector);
    const double norm_sq = integrate(u * u);
    Eigen::ArrayXd values = u.values() / std::sqrt(norm_sq);

    // sign convention: phi(0) > 0 (Robin) or phi'(0) > 0 (Dirichlet)
    double probe = sys.robin ? values[0] : values[1];
    if (std::abs(probe) <= 1e-300) {
      for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0) {
          probe = values[i];
          break;
        }
      }
    }
    if (probe < 0) values = -values;

    out.lambdas.push_back(lambda);
    out.phis.emplace_back(sys.grid, std::move(values));
    out.norms.push_back(norm_sq);
    out.residuals.push_back(inv.residual);
  }
  return out;
}

}  // namespace

SampledFunction Discretization::to_samples(const Eigen::ArrayXd& v) const {
  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(grid.size());
  u.segment(first_node, v.size()) = v;
  if (robin) u[0] *= kSqrt2;
  return SampledFunction(grid, std::move(u));
}

Discretization discretize(const Problem& problem) {
  const Grid& grid = problem.grid();
  const Eigen::Index n = grid.intervals();
  const double h = grid.spacing();
  const double h2 = h * h;
  const auto& v = problem.potential.values();

  Discretization sys{SymTridiagonal<double>{}, grid, 0, problem.bc.is_robin()};
  if (sys.robin) {
    sys.first_node = 0;
    sys.matrix.diag = 2.0 / h2 + v.head(n);
    sys.matrix.diag[0] += 2.0 * problem.bc.sigma() / h;
    sys.matrix.off = Eigen::ArrayXd::Constant(n - 1, -1.0 / h2);
    sys.matrix.off[0] = -kSqrt2 / h2;
  } else {
    sys.first_node = 1;
    sys.matrix.diag = 2.0 / h2 + v.segment(1, n - 1);
    sys.matrix.off = Eigen::ArrayXd::Constant(n - 2, -1.0 / h2);
  }
  return sys;
}

Eigen::Index sturm_count(const Discretization& system, double shift) {
  return sturm_count(system.matrix, shift);
}

double EigenPair::kappa() const { return std::sqrt(-lambda); }

std::vector<double> NegativeSpectrum::eigenvalues() const {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.lambda);
  return out;
}

std::vector<double> matrix_eigenvalues(const Problem& problem, double shift, double tol) {
  const Discretization sys = discretize(problem);
  const Eigen::Index count = sturm_count(sys.matrix, shift);
  const double lo = sys.matrix.gershgorin().first - 1.0;
  std::vector<double> out;
  for (Eigen::Index k = 0; k < count; ++k) {
    out.push_back(bisect_eigenvalue(sys.matrix, k, lo, shift, tol));
  }
  return out;
}

Eigen::Index check_window_end(const Grid& grid) {
  const Eigen::Index i = grid.even_node_at_or_before(0.8 * grid.length());
  return i - (i % 4);
}

Eigen::Index last_resolved_node(const SampledFunction& phi, double relative_floor) {
  const auto& u = phi.values();
  const double floor = relative_floor * u.abs().maxCoeff();
  for (Eigen::Index i = u.size() - 1; i >= 0; --i) {
    if (std::abs(u[i]) >= floor) return i;
  }
  return 0;
}

bool tail_is_resolved(const Problem& problem, const SampledFunction& phi, double lambda,
                      double tolerance) {
  const Grid& grid = phi.grid();
  const auto& u = phi.values();
  const double h = grid.spacing();
  const Eigen::Index start = std::max<Eigen::Index>(
      {grid.node_at_or_after(problem.support_end) + 1, grid.node_at_or_after(0.6 * grid.length()), 1});
  // Past the decay floor the samples are at inverse-iteration noise level
  // and the truncation can no longer move the eigenvalue.
  const Eigen::Index end =
      std::min(check_window_end(grid), last_resolved_node(phi, kTailFloor));
  if (end < start + 4) return end < check_window_end(grid);
  if (u[start] == 0.0 || u[end] == 0.0) return false;

  auto log_slope = [&](Eigen::Index i) { return (u[i + 1] - u[i - 1]) / (2.0 * h * u[i]); };
  const double kappa = std::sqrt(std::max(-lambda, 0.0));
  return std::abs(log_slope(end) - log_slope(start)) <= tolerance * (1.0 + kappa);
}

NegativeSpectrum negative_eigenvalues(const Problem& problem, const SolverOptions& options) {
  if (!(options.tol > 0)) throw Error(ErrorKind::Configuration, "tolerance must be positive");

  Problem current = problem;
  int doublings = 0;
  GridSolution fine;
  GridSolution coarse;
  for (;;) {
    if (current.grid().intervals() % 4 != 0) {
      throw Error(ErrorKind::Configuration,
                  "solver grid needs an interval count divisible by 4 (Richardson partner grid)");
    }
    fine = solve_grid(current, options.tol);
    bool resolved = true;
    for (std::size_t k = 0; k < fine.lambdas.size(); ++k) {
      if (fine.lambdas[k] > -options.edge_tolerance) continue;
      if (!tail_is_resolved(current, fine.phis[k], fine.lambdas[k], options.tail_tolerance)) {
        resolved = false;
        break;
      }
    }
    if (resolved) break;
    if (doublings >= options.max_doublings ||
        2 * current.grid().intervals() > options.max_intervals) {
      std::ostringstream os;
      os << "eigenfunction tail not resolved on [0, " << current.grid().length() << "] after "
         << doublings << " domain doublings";
      throw Error(ErrorKind::TruncationTooSmall, os.str());
    }
    current = extend_domain(current, 2);
    ++doublings;
  }
  const Problem coarse_problem = coarsen(current);
  coarse = solve_grid(coarse_problem, options.tol);

  NegativeSpectrum out{{}, current, {}, {}};
  out.refinement.fine_intervals = current.grid().intervals();
  out.refinement.coarse_intervals = coarse_problem.grid().intervals();
  out.refinement.fine = fine.lambdas;
  out.refinement.coarse = coarse.lambdas;
  out.refinement.domain_doublings = doublings;

  for (std::size_t k = 0; k + 1 < fine.lambdas.size(); ++k) {
    if (fine.lambdas[k + 1] - fine.lambdas[k] < 10.0 * options.tol) {
      throw Error(ErrorKind::ClusterDetected, "two eigenvalues closer than 10 tol");
    }
  }

  const bool robin = current.bc.is_robin();
  int index = 0;
  for (std::size_t k = 0; k < fine.lambdas.size(); ++k) {
    const double lf = fine.lambdas[k];
    const bool has_partner = k < coarse.lambdas.size();
    const double lc = has_partner ? coarse.lambdas[k] : lf;
    const double lambda = has_partner ? (4.0 * lf - lc) / 3.0 : lf;
    if (lf > -options.edge_tolerance || lambda > -options.edge_tolerance) {
      out.near_threshold.push_back(lambda);
      continue;
    }
    out.refinement.extrapolated.push_back(lambda);

    const SampledFunction& phi = fine.phis[k];
    auto extrapolate = [&](double f, double c) { return has_partner ? (4.0 * f - c) / 3.0 : f; };
    const double slope = extrapolate(boundary_slope(phi),
                                     has_partner ? boundary_slope(coarse.phis[k]) : 0.0);
    double phi0 = 0.0;
    double dphi0 = slope;
    bool flagged = false;
    if (robin) {
      phi0 = extrapolate(phi[0], has_partner ? coarse.phis[k][0] : 0.0);
      const double sigma = current.bc.sigma();
      if (std::abs(slope - sigma * phi0) < 1e-6 * (1.0 + std::abs(slope))) {
        dphi0 = sigma * phi0;
      } else {
        flagged = true;
      }
    }
    EigenPair pair{lambda, phi, fine.norms[k], phi0, dphi0, ++index, lf, lc,
                   fine.residuals[k], flagged, std::nullopt};
    if (has_partner) pair.phi_coarse = coarse.phis[k];
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

BoundaryData boundary_data(const EigenPair& pair, const BoundaryCondition& bc) {
  if (bc.is_dirichlet()) {
    if (pair.phi0 != 0.0 || pair.phi[0] != 0.0) {
      throw Error(ErrorKind::InvalidInput, "Dirichlet eigenfunction does not vanish at 0");
    }
  } else if (!pair.dphi0_flagged &&
             std::abs(pair.dphi0 - bc.sigma() * pair.phi0) > 1e-6 * (1.0 + std::abs(pair.dphi0))) {
    throw Error(ErrorKind::InvalidInput, "boundary data violate the Robin condition");
  }
  return {pair.phi0, pair.dphi0, pair.norm_sq};
}

ConvergenceStudy convergence_study(const Problem& finest) {
  if (finest.grid().intervals() % 8 != 0) {
    throw Error(ErrorKind::Configuration, "convergence study needs n divisible by 8");
  }
  const Problem half = coarsen(finest);
  const Problem quarter = coarsen(half);
  const auto l4 = matrix_eigenvalues(quarter);
  const auto l2 = matrix_eigenvalues(half);
  const auto l1 = matrix_eigenvalues(finest);
  ConvergenceStudy out;
  out.intervals = {quarter.grid().intervals(), half.grid().intervals(), finest.grid().intervals()};
  const std::size_t count = std::min({l4.size(), l2.size(), l1.size()});
  for (std::size_t k = 0; k < count; ++k) {
    out.eigenvalues.push_back({l4[k], l2[k], l1[k]});
    out.ratios.push_back((l4[k] - l2[k]) / (l2[k] - l1[k]));
  }
  return out;
}

}  // namespace halfline
