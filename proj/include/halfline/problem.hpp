#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "halfline/grid.hpp"

namespace halfline {

struct Robin {
  double sigma;
};

struct Dirichlet {};

/// Condition at the origin: phi'(0) - sigma phi(0) = 0, or phi(0) = 0.
class BoundaryCondition {
 public:
  static BoundaryCondition robin(double sigma) {
    if (!std::isfinite(sigma)) {
      throw Error(ErrorKind::Configuration, "Robin parameter must be finite");
    }
    return BoundaryCondition(Robin{sigma});
  }
  static BoundaryCondition neumann() { return robin(0.0); }
  static BoundaryCondition dirichlet() { return BoundaryCondition(Dirichlet{}); }

  bool is_dirichlet() const { return std::holds_alternative<Dirichlet>(value_); }
  bool is_robin() const { return !is_dirichlet(); }

  /// Robin parameter; throws for a Dirichlet condition.
  double sigma() const {
    if (is_dirichlet()) {
      throw Error(ErrorKind::Configuration, "Dirichlet condition has no Robin parameter");
    }
    return std::get<Robin>(value_).sigma;
  }

  std::string describe() const;

  friend bool operator==(const BoundaryCondition& a, const BoundaryCondition& b) {
    if (a.is_dirichlet() || b.is_dirichlet()) return a.is_dirichlet() == b.is_dirichlet();
    return a.sigma() == b.sigma();
  }

 private:
  explicit BoundaryCondition(std::variant<Robin, Dirichlet> v) : value_(v) {}
  std::variant<Robin, Dirichlet> value_;
};

/// Potential on a truncated half-line together with the condition at 0.
///
/// `support_end` is the node beyond which the potential vanishes. Problems
/// produced by a commutation step keep the support end of their input; there
/// the potential vanishes beyond it only up to discretization error.
/// `discontinuities` lists positions where the potential jumps (used to skip
/// nodes in pointwise residual checks). `lt_mode` enforces V <= 0.
///
/// `partner` is the potential used on the every-other-node grid of the
/// Richardson pair. It defaults to the subsampled potential; commutation
/// outputs set it to the same formula evaluated with coarse-grid data so that
/// their O(h^2) error cancels in the extrapolation.
struct Problem {
  SampledFunction potential;
  BoundaryCondition bc;
  double support_end = 0.0;
  bool lt_mode = false;
  std::vector<double> discontinuities;
  std::optional<SampledFunction> partner;

  Problem(SampledFunction v, BoundaryCondition b, double x0, bool nonpositive = false,
          std::vector<double> jumps = {});

  const Grid& grid() const { return potential.grid(); }

  /// True if node i lies within one node of a listed discontinuity.
  bool near_discontinuity(Eigen::Index i) const;

  /// Tolerance used for the V <= 0 hypothesis.
  static constexpr double kSignTolerance = 1e-12;
};

/// Simpson value of int_0^{x_m} V^2 (m even). On a node that carries a
/// listed jump, V^2 is replaced by the mean of the squared one-sided limits
/// (linear extrapolation from each side), which keeps the rule second order.
double integral_of_square(const Problem& p, Eigen::Index m);

/// int_0^{x_m} V^2 extrapolated from the problem grid and its partner
/// ((4 I_h - I_2h) / 3); m must be divisible by 4.
double extrapolated_square_integral(const Problem& p, Eigen::Index m);

/// Largest potential sample; throws HypothesisViolated if it exceeds the
/// sign tolerance.
void require_nonpositive(const SampledFunction& v);

/// The same problem on [0, factor*L] with the potential extended by zero.
Problem extend_domain(const Problem& p, Eigen::Index factor);

/// The same problem on every other node (Richardson partner grid); uses
/// `partner` when present.
Problem coarsen(const Problem& p);

/// Attaches a partner potential after checking its grid.
Problem with_partner(Problem p, SampledFunction coarse);

}  // namespace halfline
