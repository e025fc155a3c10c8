#include "halfline/problem.hpp"

#include <cmath>
#include <sstream>

namespace halfline {

std::string BoundaryCondition::describe() const {
  if (is_dirichlet()) return "dirichlet";
  std::ostringstream os;
  os.precision(17);
  os << "robin(" << sigma() << ")";
  return os.str();
}

Problem::Problem(SampledFunction v, BoundaryCondition b, double x0, bool nonpositive,
                 std::vector<double> jumps)
    : potential(std::move(v)),
      bc(b),
      support_end(x0),
      lt_mode(nonpositive),
      discontinuities(std::move(jumps)) {
  if (!std::isfinite(support_end) || support_end < 0 || support_end > grid().length()) {
    throw Error(ErrorKind::Configuration, "support end must lie inside the domain");
  }
  if (lt_mode) require_nonpositive(potential);
}

bool Problem::near_discontinuity(Eigen::Index i) const {
  const double h = grid().spacing();
  const double x = grid().node(i);
  for (double d : discontinuities) {
    if (std::abs(x - d) <= 1.5 * h) return true;
  }
  return false;
}

void require_nonpositive(const SampledFunction& v) {
  const double vmax = v.values().maxCoeff();
  if (vmax > Problem::kSignTolerance) {
    std::ostringstream os;
    os << "potential must be nonpositive, found sample " << vmax;
    throw Error(ErrorKind::HypothesisViolated, os.str());
  }
}

double integral_of_square(const Problem& p, Eigen::Index m) {
  const Grid& grid = p.grid();
  Eigen::ArrayXd f = p.potential.values().square();
  const auto& v = p.potential.values();
  const double h = grid.spacing();
  for (double d : p.discontinuities) {
    const Eigen::Index i = grid.node_at_or_after(d);
    if (std::abs(grid.node(i) - d) > 1e-9 * h || i < 2 || i + 2 > grid.intervals()) continue;
    const double left = 2.0 * v[i - 1] - v[i - 2];
    const double right = 2.0 * v[i + 1] - v[i + 2];
    f[i] = 0.5 * (left * left + right * right);
  }
  return integrate_to(SampledFunction(grid, std::move(f)), m);
}

double extrapolated_square_integral(const Problem& p, Eigen::Index m) {
  if (m % 4 != 0) throw Error(ErrorKind::Configuration, "extrapolated integral needs m divisible by 4");
  const double fine = integral_of_square(p, m);
  const double coarse = integral_of_square(coarsen(p), m / 2);
  return (4.0 * fine - coarse) / 3.0;
}

Problem extend_domain(const Problem& p, Eigen::Index factor) {
  Problem out(extend_with_zeros(p.potential, factor), p.bc, p.support_end, p.lt_mode,
              p.discontinuities);
  if (p.partner) out.partner = extend_with_zeros(*p.partner, factor);
  return out;
}

Problem coarsen(const Problem& p) {
  return Problem(p.partner ? *p.partner : subsample(p.potential), p.bc, p.support_end, p.lt_mode,
                 p.discontinuities);
}

Problem with_partner(Problem p, SampledFunction coarse) {
  const Grid& g = p.grid();
  if (!g.even() || !(coarse.grid() == Grid(g.length(), g.intervals() / 2))) {
    throw Error(ErrorKind::Configuration, "partner potential must live on the every-other-node grid");
  }
  if (p.lt_mode) require_nonpositive(coarse);
  p.partner = std::move(coarse);
  return p;
}

}  // namespace halfline
