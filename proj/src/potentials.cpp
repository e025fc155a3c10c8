#include "halfline/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "halfline/csv.hpp"

namespace halfline {

namespace {

constexpr double kWellGuard = 30.0;
constexpr double kInsertionCutoff = 1e-14;

Eigen::Index round_up(double value, Eigen::Index multiple) {
  return multiple * static_cast<Eigen::Index>(std::ceil(value / static_cast<double>(multiple) - 1e-9));
}

// cosh/cos and sinh(q a)/q, sin(k a)/k written in terms of s = V0 - kappa^2,
// continuous through s = 0.
struct WellFactors {
  double c;
  double s_over;  // sin(k a)/k or sinh(q a)/q
  double s;
};

WellFactors well_factors(double s, double a) {
  if (s > 0) {
    const double k = std::sqrt(s);
    return {std::cos(k * a), k * a < 1e-8 ? a : std::sin(k * a) / k, s};
  }
  const double q = std::sqrt(-s);
  return {std::cosh(q * a), q * a < 1e-8 ? a : std::sinh(q * a) / q, s};
}

// phi'(a) + kappa phi(a) for the solution satisfying the condition at 0.
double matching(double kappa, double depth, double a, const BoundaryCondition& bc) {
  const auto f = well_factors(depth - kappa * kappa, a);
  if (bc.is_dirichlet()) return f.c + kappa * f.s_over;
  const double sigma = bc.sigma();
  const double phi = f.c + sigma * f.s_over;
  const double dphi = -f.s * f.s_over + sigma * f.c;
  return dphi + kappa * phi;
}

void check_well(double depth, double width) {
  if (!(depth > 0) || !(width > 0) || !std::isfinite(depth) || !std::isfinite(width)) {
    throw Error(ErrorKind::Configuration, "square well needs positive finite depth and width");
  }
  if (std::sqrt(depth) * width > kWellGuard) {
    throw Error(ErrorKind::Configuration, "square well too deep or wide: sqrt(depth)*width > 30");
  }
}

double insertion_half_integral(double x, double omega) {
  // int_0^x cosh^2(omega t) dt
  if (omega == 0.0) return x;
  return 0.5 * x + std::sinh(2.0 * omega * x) / (4.0 * omega);
}

}  // namespace

Grid PotentialFamily::make_grid(const GridOptions& options) const {
  if (!(options.spacing > 0)) throw Error(ErrorKind::Configuration, "grid spacing must be positive");
  double kappa_min = 1.0;
  if (!known_spectrum.empty()) {
    kappa_min = std::numeric_limits<double>::infinity();
    for (double l : known_spectrum) kappa_min = std::min(kappa_min, std::sqrt(-l));
  }
  const double span = std::isfinite(support_end) ? support_end : 0.0;
  const double wanted =
      options.length.value_or(span + std::max(10.0, options.tail_factor / kappa_min));
  if (wanted < span) throw Error(ErrorKind::Configuration, "domain shorter than the potential support");

  if (align > 0) {
    double h = 0;
    Eigen::Index n = 0;
    if (options.intervals) {
      n = *options.intervals;
      const Eigen::Index m = std::max<Eigen::Index>(4, round_up(align * n / wanted, 4));
      h = align / static_cast<double>(m);
    } else {
      const Eigen::Index m = round_up(align / options.spacing, 4);
      h = align / static_cast<double>(m);
      n = round_up(wanted / h, 8);
    }
    return Grid(static_cast<double>(n) * h, n);
  }
  const Eigen::Index n = options.intervals.value_or(round_up(wanted / options.spacing, 8));
  return Grid(wanted, n);
}

SampledFunction PotentialFamily::sample(const Grid& grid) const {
  const double h = grid.spacing();
  return SampledFunction::from_function(grid, [&](double x) {
    for (double d : discontinuities) {
      if (std::abs(x - d) <= 1e-9 * h) {
        const double delta = 1e-6 * h;
        return 0.5 * (sampler(d - delta) + sampler(d + delta));
      }
    }
    return sampler(x);
  });
}

Problem PotentialFamily::problem(const GridOptions& options) const {
  const Grid grid = make_grid(options);
  const double x0 = std::isfinite(support_end) ? support_end : grid.length();
  return Problem(sample(grid), known_bc, std::min(x0, grid.length()), nonpositive, discontinuities);
}

PotentialFamily free_family(double sigma0) {
  PotentialFamily f;
  f.name = "free";
  f.parameters = {{"sigma0", sigma0}};
  f.sampler = [](double) { return 0.0; };
  f.known_bc = BoundaryCondition::robin(sigma0);
  if (sigma0 < 0) f.known_spectrum = {-sigma0 * sigma0};
  f.note = "V = 0 with phi'(0) = sigma0 phi(0); one bound state -sigma0^2 iff sigma0 < 0";
  return f;
}

std::vector<double> square_well_eigenvalues(double depth, double width,
                                            const BoundaryCondition& bc) {
  check_well(depth, width);
  const double sigma_neg = bc.is_robin() ? std::max(-bc.sigma(), 0.0) : 0.0;
  const double kappa_max = std::sqrt(depth + sigma_neg * sigma_neg) + 1.0;
  constexpr int kScan = 20000;
  std::vector<double> kappas;
  double prev_k = kappa_max * 1e-9;
  double prev_f = matching(prev_k, depth, width, bc);
  for (int i = 1; i <= kScan; ++i) {
    const double k = kappa_max * static_cast<double>(i) / kScan;
    const double fk = matching(k, depth, width, bc);
    if (prev_f == 0.0) {
      kappas.push_back(prev_k);
    } else if ((prev_f < 0) != (fk < 0) && fk != 0.0) {
      double lo = prev_k, hi = k, flo = prev_f;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = matching(mid, depth, width, bc);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      kappas.push_back(0.5 * (lo + hi));
    }
    prev_k = k;
    prev_f = fk;
  }
  std::vector<double> out;
  for (double k : kappas) out.push_back(-k * k);
  std::sort(out.begin(), out.end());
  return out;
}

PotentialFamily square_well_family(double depth, double width, const BoundaryCondition& bc) {
  PotentialFamily f;
  f.name = "square-well";
  f.parameters = {{"depth", depth}, {"width", width}};
  f.known_spectrum = square_well_eigenvalues(depth, width, bc);
  f.sampler = [depth, width](double x) { return x < width ? -depth : 0.0; };
  f.support_end = width;
  f.known_bc = bc;
  f.discontinuities = {width};
  f.align = width;
  f.note = "V = -depth on [0, width); eigenvalues from the matching condition at the edge";
  return f;
}

double neumann_insertion_potential(double x, double omega, double gamma) {
  const double c = std::cosh(omega * x);
  const double s = std::sinh(omega * x);
  const double phi = 1.0 + gamma * insertion_half_integral(x, omega);
  // G' = gamma (2 omega s c + gamma (omega x s c - c^2)) / Phi^2, with no
  // cancellation between exponentially large terms
  const double dg = gamma * (2.0 * omega * s * c + gamma * (omega * x * s * c - c * c)) / (phi * phi);
  return -2.0 * dg;
}

double neumann_insertion_moment(double omega, double gamma) {
  return 0.25 * gamma * gamma * gamma - 0.75 * gamma * omega * omega + omega * omega * omega;
}

PotentialFamily neumann_insertion_family(double omega, double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma) || !std::isfinite(omega)) {
    throw Error(ErrorKind::Configuration, "insertion family needs gamma > 0 and finite omega");
  }
  omega = std::abs(omega);
  PotentialFamily f;
  f.name = "neumann-insertion";
  f.parameters = {{"omega", omega}, {"gamma", gamma}};
  f.known_bc = BoundaryCondition::robin(-gamma);
  f.nonpositive = false;  // V(0) = 2 gamma^2 > 0
  if (omega > 0) {
    f.known_spectrum = {-omega * omega};
    // last point of a fine scan where |V| is still above the cutoff
    const double step = 1e-3 / omega;
    double x0 = 0.0;
    for (double x = 0.0; x <= 60.0 / omega; x += step) {
      if (std::abs(neumann_insertion_potential(x, omega, gamma)) >= kInsertionCutoff) x0 = x + step;
    }
    f.support_end = x0;
    f.sampler = [omega, gamma, x0](double x) {
      return x < x0 ? neumann_insertion_potential(x, omega, gamma) : 0.0;
    };
    f.note = "cosh seed inserted at -omega^2 into the free Neumann operator; bc robin(-gamma)";
  } else {
    // degenerate seed u = 1: V = 2 gamma^2 / (1 + gamma x)^2 > 0, no compact support
    f.support_end = std::numeric_limits<double>::infinity();
    f.sampler = [gamma](double x) { return neumann_insertion_potential(x, 0.0, gamma); };
    f.note = "omega = 0 edge case: V > 0 everywhere, no bound state, not LT admissible";
  }
  return f;
}

Problem family_free(double sigma0, const GridOptions& options) {
  return free_family(sigma0).problem(options);
}

Problem family_square_well(double depth, double width, const BoundaryCondition& bc,
                           const GridOptions& options) {
  return square_well_family(depth, width, bc).problem(options);
}

Problem family_neumann_insertion(double omega, double gamma, const GridOptions& options) {
  return neumann_insertion_family(omega, gamma).problem(options);
}

Problem load_potential(const std::filesystem::path& path, const BoundaryCondition& bc,
                       const LoadOptions& options) {
  const SampleTable table = read_sample_table(path);
  const std::size_t m = table.x.size();
  if (m < 4) throw Error(ErrorKind::GridTooCoarse, "potential file needs at least 4 samples");
  for (std::size_t k = 0; k < m; ++k) {
    if (!std::isfinite(table.x[k]) || !std::isfinite(table.value[k])) {
      throw Error(ErrorKind::InvalidInput, "potential file contains non-finite values");
    }
    if (k > 0 && !(table.x[k] > table.x[k - 1])) {
      throw Error(ErrorKind::InvalidInput, "sample positions must increase strictly");
    }
  }
  if (table.x.front() != 0.0) throw Error(ErrorKind::InvalidInput, "samples must start at x = 0");
  if (options.lt_mode) {
    for (std::size_t k = 0; k < m; ++k) {
      if (table.value[k] > Problem::kSignTolerance) {
        std::ostringstream os;
        os << "positive potential sample " << table.value[k] << " at x = " << table.x[k];
        throw Error(ErrorKind::HypothesisViolated, os.str());
      }
    }
  }

  double support = 0.0;
  if (options.support_end) {
    support = *options.support_end;
  } else {
    for (std::size_t k = m; k-- > 0;) {
      if (table.value[k] != 0.0) {
        support = table.x[std::min(k + 1, m - 1)];
        break;
      }
    }
  }

  const double last = table.x.back();
  const double step = last / static_cast<double>(m - 1);
  bool uniform = true;
  for (std::size_t k = 1; k < m && uniform; ++k) {
    uniform = std::abs(table.x[k] - step * static_cast<double>(k)) <= 1e-9 * step;
  }

  // a file that already reaches past the support keeps its length; the
  // solver extends the domain if the tails need more
  double length = options.grid.length.value_or(
      last >= support + 10.0 ? last : std::max(last, support + std::max(10.0, options.grid.tail_factor)));
  if (length < support) throw Error(ErrorKind::Configuration, "domain shorter than the potential support");
  Eigen::Index n = 0;
  if (options.grid.intervals) {
    n = *options.grid.intervals;
  } else if (uniform && !options.grid.length) {
    // keep the file spacing so every sample (and any jump) sits on a node
    double steps = length / step;
    if (std::abs(steps - std::round(steps)) < 1e-6) steps = std::round(steps);
    n = round_up(std::ceil(steps), 8);
    length = static_cast<double>(n) * step;
  } else {
    n = round_up(length / options.grid.spacing, 8);
  }
  const Grid grid(length, n);
  SampledFunction v = monotone_cubic_resample(table, grid, 0.0);
  const Eigen::Index cut = grid.node_at_or_after(support);
  Eigen::ArrayXd values = v.values();
  // the node at the support end keeps its sample (zero unless the file ends there)
  values.tail(values.size() - cut - 1).setZero();
  return Problem(SampledFunction(grid, std::move(values)), bc, grid.node(cut), options.lt_mode);
}

std::vector<FamilyInfo> family_registry() {
  auto info = [](const PotentialFamily& f, std::string params) {
    return FamilyInfo{f.name, std::move(params), f.note};
  };
  return {
      info(free_family(-1.0), "sigma0"),
      info(square_well_family(4.0, 1.0, BoundaryCondition::neumann()), "depth, width, bc, sigma0"),
      info(neumann_insertion_family(1.0, 1.0), "omega, gamma"),
  };
}

}  // namespace halfline
