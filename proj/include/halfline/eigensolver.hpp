#pragma once

#include <array>
#include <optional>
#include <vector>

#include "halfline/grid.hpp"
#include "halfline/problem.hpp"
#include "halfline/tridiagonal.hpp"

namespace halfline {

/// Three-point finite-difference operator on the unknown nodes of a problem.
///
/// Robin: unknowns x_0..x_{n-1}; the ghost node x_{-1} is eliminated with the
/// central-difference boundary identity and the first row is symmetrized with
/// the half weight of the first node. Dirichlet: unknowns x_1..x_{n-1}. The
/// truncation point x_n is always a Dirichlet node.
struct Discretization {
  SymTridiagonal<double> matrix;
  Grid grid;
  Eigen::Index first_node = 0;
  bool robin = true;

  /// Grid samples (including the zero Dirichlet nodes) of a matrix eigenvector.
  SampledFunction to_samples(const Eigen::ArrayXd& v) const;
};

Discretization discretize(const Problem& problem);

Eigen::Index sturm_count(const Discretization& system, double shift);

/// One negative eigenvalue with its L2-normalized eigenfunction.
///
/// `lambda`, `phi0` and `dphi0` are Richardson-extrapolated from the problem
/// grid and its every-other-node partner; `phi` holds the samples on the
/// problem grid. `norm_sq` is the Simpson norm before normalization.
struct EigenPair {
  double lambda = 0;
  SampledFunction phi;
  double norm_sq = 1;
  double phi0 = 0;
  double dphi0 = 0;
  int index = 0;
  double lambda_fine = 0;
  double lambda_coarse = 0;
  double residual = 0;
  bool dphi0_flagged = false;
  /// Normalized eigenfunction on the every-other-node grid, when solved there.
  std::optional<SampledFunction> phi_coarse;

  double kappa() const;
  /// |phi(0)|^2 / ||phi||^2 (Robin weight).
  double value_weight() const { return phi0 * phi0; }
  /// |phi'(0)|^2 / ||phi||^2 (Dirichlet weight).
  double slope_weight() const { return dphi0 * dphi0; }
};

struct Refinement {
  Eigen::Index coarse_intervals = 0;
  Eigen::Index fine_intervals = 0;
  std::vector<double> coarse;
  std::vector<double> fine;
  std::vector<double> extrapolated;
  int domain_doublings = 0;
};

struct NegativeSpectrum {
  std::vector<EigenPair> pairs;
  /// The problem actually solved (its domain may have been extended).
  Problem problem;
  /// Eigenvalues in (-edge_tolerance, 0): reported, never removed.
  std::vector<double> near_threshold;
  Refinement refinement;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  std::vector<double> eigenvalues() const;
};

struct SolverOptions {
  double tol = 1e-10;
  double edge_tolerance = 1e-8;
  int max_doublings = 3;
  /// Flatness bound for phi'/phi on the potential-free tail, relative to 1+kappa.
  double tail_tolerance = 1e-7;
  Eigen::Index max_intervals = Eigen::Index(1) << 23;
};

/// Raw eigenvalues of the discretization below `shift`, increasing.
std::vector<double> matrix_eigenvalues(const Problem& problem, double shift = 0.0,
                                       double tol = 1e-12);

/// All negative eigenvalues with eigenfunctions. Throws TruncationTooSmall
/// when an eigenfunction has not reached its exponential tail after the
/// allowed domain doublings and ClusterDetected for near-degenerate pairs.
NegativeSpectrum negative_eigenvalues(const Problem& problem, const SolverOptions& options = {});

/// End of the window [0, 0.8 L] on which tail-sensitive checks run; the node
/// index is divisible by 4 so the window is shared with the partner grid.
Eigen::Index check_window_end(const Grid& grid);

/// Relative level below which eigenfunction samples are treated as decayed.
inline constexpr double kTailFloor = 1e-12;

/// Last node where |phi| is at least `relative_floor` times its peak.
Eigen::Index last_resolved_node(const SampledFunction& phi, double relative_floor = kTailFloor);

/// True when the eigenfunction's log-derivative is flat on the tail window
/// [max(x0, 0.6 L), 0.8 L], cut at the decay floor.
bool tail_is_resolved(const Problem& problem, const SampledFunction& phi, double lambda,
                      double tolerance);

struct BoundaryData {
  double phi0;
  double dphi0;
  double norm_sq;
};

/// Stored boundary triple; rechecks the boundary condition (phi0 = 0 for
/// Dirichlet, dphi0 = sigma phi0 for Robin unless flagged).
BoundaryData boundary_data(const EigenPair& pair, const BoundaryCondition& bc);

/// Raw discrete eigenvalues on the problem grid and its two coarsenings.
struct ConvergenceStudy {
  std::array<Eigen::Index, 3> intervals{};
  std::vector<std::array<double, 3>> eigenvalues;  // {h4, h2, h} per eigenvalue
  std::vector<double> ratios;  // (lambda_{n/4} - lambda_{n/2}) / (lambda_{n/2} - lambda_n)
};

ConvergenceStudy convergence_study(const Problem& finest);

}  // namespace halfline
