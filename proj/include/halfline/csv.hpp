#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "halfline/grid.hpp"

namespace halfline {

/// Two-column table read from a `x,value` CSV file.
struct SampleTable {
  std::vector<double> x;
  std::vector<double> value;
};

/// Writes `x,value` with a header line and 17 significant digits.
void write_sampled_csv(const std::filesystem::path& path, const SampledFunction& f);

/// Reads a `x,value` file (header line required, blank lines skipped).
SampleTable read_sample_table(const std::filesystem::path& path);

/// Aligned multi-column CSV: first column x, then one column per function.
void write_columns_csv(const std::filesystem::path& path, const Eigen::ArrayXd& x,
                       const std::vector<std::pair<std::string, Eigen::ArrayXd>>& columns);

/// Shape-preserving (Fritsch-Carlson) cubic interpolation of a table,
/// evaluated on every node of `grid`; nodes beyond the table end get `outside`.
SampledFunction monotone_cubic_resample(const SampleTable& table, const Grid& grid,
                                        double outside = 0.0);

}  // namespace halfline
