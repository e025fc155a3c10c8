#pragma once

#include <optional>
#include <vector>

#include "halfline/eigensolver.hpp"

namespace halfline {

/// One double-commutation removal: H -> H_lambda with
/// V_out = V - 2 G', G = gamma phi^2 / Phi, Phi = 1 + gamma int_0^x phi^2.
///
/// All identity checks run on the window [0, x_w], x_w = check_window_end.
/// `V_out` equals `V_out_raw` there and vanishes beyond it: on the truncated
/// grid Phi reaches 0 at L and the raw formula degenerates near the end.
struct CommutationStep {
  double lambda_removed;
  double gamma;
  SampledFunction Phi;
  BoundaryCondition bc_before;
  BoundaryCondition bc_after;
  /// |phi(0)|^2 (Robin) or |phi'(0)|^2 (Dirichlet), phi normalized.
  double boundary_weight;
  SampledFunction V_in;
  SampledFunction V_out;
  SampledFunction V_out_raw;
  SampledFunction phi_used;
  SampledFunction dphi;
  SampledFunction G;
  SampledFunction dG;
  double intV2_in;
  double intV2_out;
  Eigen::Index window_end;
  /// max |V_out| on [x0, x_w], away from discontinuities.
  double support_residual;
  double Phi_end;
  /// Phi(L) < 1e-6; expected on any truncated domain.
  bool conditioning_warning;
  Problem output;

  bool robin() const { return bc_before.is_robin(); }
  double sigma_before() const { return bc_before.sigma(); }
  double sigma_after() const { return bc_after.sigma(); }
};

/// Removes `pair` from the negative spectrum of `problem`. Throws
/// NotAnEigenpair when the pair fails the discrete eigen-equation.
CommutationStep double_commute_remove(const Problem& problem, const EigenPair& pair);

/// Insertion seed u with u' and int_0^x u^2 on the problem grid.
struct Seed {
  SampledFunction u;
  SampledFunction du;
  SampledFunction integral;
};

/// Seed from samples; derivative and running integral are numerical.
Seed sampled_seed(const SampledFunction& u);

/// cosh(omega x) with its analytic derivative and int_0^x cosh^2.
Seed cosh_seed(const Grid& grid, double omega);

/// Max relative residual of -u'' + (V - lambda) u (fourth-order second difference).
double seed_residual(const Problem& problem, const Seed& seed, double lambda);

/// Inserts lambda using the seed and gamma > 0. The new condition at 0 is
/// sigma - gamma u(0)^2 (Robin) or Dirichlet again. Throws
/// SeedResidualTooLarge if the seed misses its equation by more than 1e-6.
Problem double_commute_insert(const Problem& problem, const Seed& seed, double lambda,
                              double gamma);

/// Single commutation with the ground state: V_out = -V + 2 lambda + 2 F^2 on
/// the window (equivalent to V - 2 F' by the Riccati equation), Dirichlet at 0.
/// Throws GroundStateHasZeros.
Problem single_commute_remove(const Problem& problem, const EigenPair& ground);

/// psi - gamma (phi / Phi) int_0^x psi phi for an eigenpair of the pre-step problem.
SampledFunction transform_eigenfunction(const CommutationStep& step, const EigenPair& psi);

struct RiccatiDiagnostics {
  SampledFunction F;
  SampledFunction F_tilde;
  SampledFunction G;
  double residual_F;
  double residual_F_tilde;
  /// max |G - (F - F_tilde)|, zero by construction up to rounding.
  double decomposition_error;
  double F_at_0;
  double F_tilde_at_0;
  double sigma_before;
  double sigma_after;
  double kappa;
  /// max |F + kappa| and |F_tilde - kappa| on [x0, 0.8 L].
  double F_tail_deviation;
  double F_tilde_tail_deviation;
  Eigen::Index window_end;
};

RiccatiDiagnostics riccati_diagnostics(const Problem& problem, const EigenPair& ground,
                                       const CommutationStep& step);

struct AntiderivativeCheck {
  double residual;
  double scale;
  double integral_quadrature;
  double integral_bracket;
  double relative_difference;
};

/// Compares G'(G' - V) with the derivative of the closed-form bracket
/// |lambda| G - (gamma phi'^2 / Phi - gamma^2 phi' phi q / Phi + gamma^3 q^3 / 3),
/// q = phi^2 / Phi, pointwise and as integrals over the window.
AntiderivativeCheck antiderivative_identity_check(const Problem& problem, const EigenPair& pair,
                                                  const CommutationStep& step);

/// Spectrum bookkeeping of one chain stage.
struct StageSpectrum {
  int removed_label;
  std::vector<double> before;
  std::vector<double> after;
  double preservation_error;
  bool removed_exactly_one;
  bool preserved;
};

struct CommutationChain {
  NegativeSpectrum initial;
  std::vector<CommutationStep> steps;
  std::vector<StageSpectrum> stages;
  /// 1-based labels of the original eigenvalues in removal order.
  std::vector<int> order;
  /// sigma_0..sigma_N in removal order (Robin chains only).
  std::vector<double> sigma_sequence;
  NegativeSpectrum final_spectrum;
  /// Input problem and removed eigenpair of each step (for diagnostics).
  std::vector<Problem> step_inputs;
  std::vector<EigenPair> removed_pairs;

  const Problem& initial_problem() const { return initial.problem; }
  const Problem& final_problem() const { return final_spectrum.problem; }
  bool dirichlet() const { return initial.problem.bc.is_dirichlet(); }
};

/// Removes every negative eigenvalue, re-solving after each step. `order`
/// holds 1-based labels of the original eigenvalues; empty means increasing.
CommutationChain build_chain(const Problem& problem, const std::vector<int>& order = {},
                             const SolverOptions& options = {});

}  // namespace halfline
