#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfline/commutation.hpp"

namespace halfline {

enum class ReportKind { MainRobin, Dirichlet, ELU, SchminckeLower, WholeLineReference };

std::string to_string(ReportKind kind);

/// Both sides of one inequality with the right-hand side broken into terms.
/// `terms` are summed left to right to give `rhs`; `gap` is rhs - lhs for
/// upper bounds and lhs - rhs for lower bounds.
struct LTReport {
  ReportKind kind;
  double lhs = 0;
  double rhs = 0;
  std::vector<std::pair<std::string, double>> terms;
  double gap = 0;
  bool holds = false;
  double tolerance = 0;
  bool lower_bound = false;
  /// Whether V <= 0 was enforced (the bounds assume it).
  bool hypothesis_checked = true;
  std::vector<double> sigma_sequence;
  std::vector<double> eigenvalues;
  /// Dirichlet report: the bound without the boundary term.
  std::optional<double> weak_rhs;
};

struct ReportOptions {
  /// Throw HypothesisViolated for a positive potential sample.
  bool require_nonpositive = true;
};

/// sigma_j = sigma_{j-1} + phi_j(0)^2 / ||phi_j||^2 in increasing-lambda order.
std::vector<double> sigma_sequence(const NegativeSpectrum& spectrum);

/// int V^2 and int V over the whole grid of the solved problem.
double potential_square_integral(const Problem& problem);
double potential_integral(const Problem& problem);

LTReport report_main_robin(const NegativeSpectrum& spectrum, const ReportOptions& options = {});
LTReport report_dirichlet(const NegativeSpectrum& spectrum, const ReportOptions& options = {});
LTReport report_whole_line(const NegativeSpectrum& spectrum, const ReportOptions& options = {});
LTReport report_elu(const NegativeSpectrum& spectrum, const ReportOptions& options = {});
LTReport report_schmincke_lower(const NegativeSpectrum& spectrum,
                                const ReportOptions& options = {});

struct TelescopeStep {
  double lambda;
  double boundary_weight;
  std::optional<double> sigma_before;
  std::optional<double> sigma_after;
  double measured_in;
  double predicted_out;
  double measured_out;
  double relative_residual;
};

struct TelescopeReport {
  std::vector<TelescopeStep> steps;
  double tolerance = 1e-3;
  double max_relative_residual = 0;
  double initial_integral = 0;
  double final_integral = 0;
  /// int V_0^2 plus the summed step increments of the identity.
  double predicted_final_integral = 0;
  bool final_nonnegative = true;
  /// (rhs - lhs) of the main (or Dirichlet) report versus (3/16) int V_N^2.
  double report_gap = 0;
  double consistency_residual = 0;
  bool holds = false;
};

TelescopeReport verify_telescope(const CommutationChain& chain, double tolerance = 1e-3);

/// Certificate that the main Robin bound implies the ELU bound. The slack
/// gap_elu - gap_main = rhs_elu - rhs_main + |lambda_1|^{3/2} / 2 must be
/// nonnegative and equal
/// (1/4)(kappa_1 - sigma_N)^2 (2 kappa_1 + sigma_N)
///   + (3/4) sum_j (|lambda_1| - |lambda_j|)(sigma_j - sigma_{j-1}).
struct DominanceCertificate {
  double rhs_main;
  double rhs_elu;
  double slack;
  double predicted_slack;
  double square_term;
  double relaxation_term;
  /// rhs_main <= rhs_elu literally (false whenever the main bound is sharp).
  bool literal_order;
  bool holds;
};

DominanceCertificate dominance_main_vs_elu(const LTReport& main, const LTReport& elu);

/// Throws DominanceViolated unless the certificate holds.
void require_dominance(const DominanceCertificate& certificate);

}  // namespace halfline
