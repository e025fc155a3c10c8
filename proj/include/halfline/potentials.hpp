#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "halfline/problem.hpp"

namespace halfline {

/// Grid selection for a family or a loaded potential. Unset fields are
/// derived: L = x0 + max(10, tail_factor / kappa_min), n = L / spacing
/// rounded up to a multiple of 8.
struct GridOptions {
  std::optional<double> length;
  std::optional<Eigen::Index> intervals;
  double spacing = 2.5e-3;
  double tail_factor = 45.0;
};

struct PotentialFamily {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  std::function<double(double)> sampler;
  double support_end = 0.0;
  BoundaryCondition known_bc = BoundaryCondition::neumann();
  /// Closed-form or oracle eigenvalues, increasing; empty if none.
  std::vector<double> known_spectrum;
  std::vector<double> discontinuities;
  bool nonpositive = true;
  /// Nodes are placed on this length when set (square-well edge).
  double align = 0.0;
  std::string note;

  Grid make_grid(const GridOptions& options = {}) const;
  /// Samples the sampler; nodes on a discontinuity take the mean of both sides.
  SampledFunction sample(const Grid& grid) const;
  Problem problem(const GridOptions& options = {}) const;
};

PotentialFamily free_family(double sigma0);
PotentialFamily square_well_family(double depth, double width, const BoundaryCondition& bc);
PotentialFamily neumann_insertion_family(double omega, double gamma);

Problem family_free(double sigma0, const GridOptions& options = {});
Problem family_square_well(double depth, double width, const BoundaryCondition& bc,
                           const GridOptions& options = {});
Problem family_neumann_insertion(double omega, double gamma, const GridOptions& options = {});

/// Eigenvalues of the square well from its matching condition, increasing.
std::vector<double> square_well_eigenvalues(double depth, double width,
                                            const BoundaryCondition& bc);

/// V(x) = -2 d/dx [gamma cosh^2(omega x) / (1 + gamma int_0^x cosh^2)].
double neumann_insertion_potential(double x, double omega, double gamma);

/// gamma^3/4 - 3 gamma omega^2/4 + omega^3, the value of (3/16) int V^2.
double neumann_insertion_moment(double omega, double gamma);

struct LoadOptions {
  GridOptions grid;
  std::optional<double> support_end;
  bool lt_mode = true;
};

/// Reads `x,value` samples and resamples them onto a uniform grid.
Problem load_potential(const std::filesystem::path& path, const BoundaryCondition& bc,
                       const LoadOptions& options = {});

struct FamilyInfo {
  std::string name;
  std::string parameters;
  std::string description;
};

std::vector<FamilyInfo> family_registry();

}  // namespace halfline
